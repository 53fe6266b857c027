#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace fibcalc {

using Rational = mpq_class;

enum class ErrorCode {
    InvalidArgument,
    NonIntegralR,
    RNotMultipleOfN,
    RNonPositive,
    InvalidMultiplicity,
    WrongBaseGenus,
    OutOfScope,
    CapTooLarge,
    InconsistentForest,
    UnknownCurve,
    LocallyTrivial,
    InapplicableFamily,
    ParseError,
};

inline const char* error_name(ErrorCode c) {
    switch (c) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonIntegralR: return "NonIntegralR";
    case ErrorCode::RNotMultipleOfN: return "RNotMultipleOfN";
    case ErrorCode::RNonPositive: return "RNonPositive";
    case ErrorCode::InvalidMultiplicity: return "InvalidMultiplicity";
    case ErrorCode::WrongBaseGenus: return "WrongBaseGenus";
    case ErrorCode::OutOfScope: return "OutOfScope";
    case ErrorCode::CapTooLarge: return "CapTooLarge";
    case ErrorCode::InconsistentForest: return "InconsistentForest";
    case ErrorCode::UnknownCurve: return "UnknownCurve";
    case ErrorCode::LocallyTrivial: return "LocallyTrivial";
    case ErrorCode::InapplicableFamily: return "InapplicableFamily";
    case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

inline Rational rat(long p, long q = 1) {
    if (q == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator");
    Rational x{mpz_class(p), mpz_class(q)};
    x.canonicalize();
    return x;
}

inline std::string str(const Rational& x) { return x.get_str(); }

inline long floor_div(long a, long b) {
    long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

struct FibrationParams {
    int g = 0;
    int h = 0;
    int n = 0;
    int r = 0;

    bool operator==(const FibrationParams&) const = default;
};

// r from the Hurwitz formula for the degree-n cover of a genus-h curve.
inline FibrationParams compute_params(int g, int h, int n) {
    if (g < 2 || (h != 0 && h != 1) || n < 2)
        throw Error(ErrorCode::InvalidArgument, "need g >= 2, h in {0,1}, n >= 2");
    long num = 2L * (g - 1 - static_cast<long>(n) * (h - 1));
    if (num % (n - 1) != 0)
        throw Error(ErrorCode::NonIntegralR, "2(g-1-n(h-1))/(n-1) is not an integer");
    long r = num / (n - 1);
    if (r <= 0) throw Error(ErrorCode::RNonPositive, "r = " + std::to_string(r));
    if (r % n != 0)
        throw Error(ErrorCode::RNotMultipleOfN,
                    "r = " + std::to_string(r) + " is not a multiple of n = " + std::to_string(n));
    return FibrationParams{g, h, n, static_cast<int>(r)};
}

enum class MultClass { NZ, NZ_PLUS_1 };

struct MultInfo {
    MultClass cls;
    int k;
};

inline MultInfo classify_multiplicity(int m, int n) {
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "n < 2");
    if (m < 2) throw Error(ErrorCode::InvalidMultiplicity, "m = " + std::to_string(m) + " < 2");
    int res = m % n;
    if (res == 0) return {MultClass::NZ, m / n};
    if (res == 1) return {MultClass::NZ_PLUS_1, m / n};
    throw Error(ErrorCode::InvalidMultiplicity,
                "m = " + std::to_string(m) + " is neither 0 nor 1 mod " + std::to_string(n));
}

inline bool classifiable(int m, int n) { return m >= 2 && (m % n == 0 || m % n == 1); }

inline Rational lambda_slope(const FibrationParams& p) {
    if (p.h != 1) throw Error(ErrorCode::WrongBaseGenus, "slope equality needs h = 1");
    return rat(12L * (p.n - 1), 2L * p.n - 1);
}

inline void require_bound_scope(const FibrationParams& p) {
    if (p.h == 0) {
        if (p.n >= 4) throw Error(ErrorCode::OutOfScope, "no bound for h = 0, n >= 4");
        return;
    }
    if (p.n == 2 && p.g < 3) throw Error(ErrorCode::OutOfScope, "n = 2 bound needs g >= 3");
}

inline Rational upper_bound_slope(const FibrationParams& p, bool triple_fibers_allowed = false) {
    require_bound_scope(p);
    const long g = p.g, n = p.n;
    if (p.h == 1) {
        if (n >= 4 || (n == 3 && g == 4)) return rat(12) - rat(6 * n * n, (n + 1) * (g - 1));
        if (n == 3) return rat(12) - rat(24, 4 * g - 17);
        return rat(12) - rat(2, g - 2);
    }
    if (n == 3) {
        if (g == 4 && triple_fibers_allowed) return rat(129, 17);
        long delta = ((g + 2) % 6 == 0) ? 0 : 1;
        return rat(12) - rat(72 * (g + 1), 4 * g * g + g + 13 - 36 * delta);
    }
    long delta = (g % 2 == 0) ? 1 : 0;
    return rat(12) - rat(4 * (2 * g + 1), g * g - 1 + delta);
}

// mu with the bound written as lambda <= 12 - mu, i.e. e >= mu * chi per germ.
inline Rational mu_threshold(const FibrationParams& p, bool triple_fiber = false) {
    require_bound_scope(p);
    const long g = p.g, n = p.n, r = p.r;
    if (p.h == 1) {
        if (n >= 4 || (n == 3 && g == 4)) return rat(12 * n * n, r * (n - 1) * (n + 1));
        if (n == 3) return rat(24, 4 * r - 13);
        return rat(4, r - 2);
    }
    if (n == 3) {
        if (g == 4 && triple_fiber) return rat(75, 17);
        long delta = (r % 6 == 0) ? 0 : 1;
        return rat(72 * (r - 1), 4 * r * r - 15 * r + 27 - 36 * delta);
    }
    long delta = (g % 2 == 0) ? 1 : 0;
    return rat(4 * (2 * g + 1), g * g - 1 + delta);
}

}  // namespace fibcalc
