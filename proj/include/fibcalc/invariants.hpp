#pragma once

#include "blowup.hpp"
#include "core.hpp"
#include "fiber.hpp"

#include <optional>
#include <vector>

namespace fibcalc {

struct LocalInvariants {
    Rational K2, chi, e, sigma;
    std::optional<Rational> Ind;  // h = 1 only
    std::optional<Rational> lambda_local;

    bool operator==(const LocalInvariants&) const = default;
};

struct GlobalInvariants {
    Rational K2, chi, e, lambda, ind_sum, sigma;
    std::vector<LocalInvariants> germs;
};

inline void finish(LocalInvariants& L) {
    L.sigma = L.K2 - 8 * L.chi;
    if (L.chi != 0) L.lambda_local = Rational(L.K2 / L.chi);
}

// Ind from its own closed formula, independent of K2 and chi.
inline Rational ind_h1(const IndexRecord& I, const FiberDescriptor& f, const FibrationParams& p) {
    if (p.h != 1) throw Error(ErrorCode::WrongBaseGenus, "Ind needs h = 1");
    const long n = p.n, r = p.r;
    Rational ind = 0;
    for (int k = 1; k <= I.max_k(); ++k)
        ind += n * (rat((n + 1) * (n - 1), 2 * n - 1) * k - 1) * I.alpha(k);
    ind += rat(n - 1, 2 * n - 1) * ((n + 1) * r - 12 * n) * chi_phi(f);
    ind += rat((n + 1) * (n - 1) * r, 2 * n - 1) * nu(f);
    ind += I.epsilon;
    return ind;
}

inline LocalInvariants local_invariants_h1(const IndexRecord& I, const FiberDescriptor& f, const FibrationParams& p) {
    if (p.h != 1) throw Error(ErrorCode::WrongBaseGenus, "local invariants for h = 1 need h = 1");
    const long n = p.n, r = p.r;
    const Rational cp = chi_phi(f), nv = nu(f);
    const Rational a0e = Rational(I.alpha0 - 2 * I.epsilon);
    LocalInvariants L;
    L.K2 = 0;
    L.chi = 0;
    for (int k = 1; k <= I.max_k(); ++k) {
        L.K2 += ((n + 1) * (n - 1) * k - n) * I.alpha(k);
        L.chi += rat((n - 1) * (n + 1) * k, 12) * I.alpha(k);
    }
    L.K2 += rat((n - 1) * (n - 1), n) * a0e + rat((n + 1) * (n - 1) * r, n) * (cp + nv) + I.epsilon;
    L.chi += rat((n - 1) * (2 * n - 1), 12 * n) * a0e + rat((n + 1) * (n - 1) * r, 12 * n) * (cp + nv) + n * cp;
    L.e = (n - 1) * I.alpha0 + n * I.sum_alpha() - (2 * n - 1) * I.epsilon + 12 * n * cp;
    L.Ind = ind_h1(I, f, p);
    finish(L);
    return L;
}

inline LocalInvariants local_invariants_h0(const IndexRecord& I, const FibrationParams& p) {
    if (p.h != 0) throw Error(ErrorCode::WrongBaseGenus, "local invariants for h = 0 need h = 0");
    const long n = p.n, r = p.r;
    const Rational a0e = Rational(I.alpha0 - 2 * I.epsilon);
    Rational quad = 0;
    for (int k = 1; k <= I.max_k(); ++k) quad += (n + 1) * k * (r - n * k) * I.alpha(k);
    LocalInvariants L;
    L.K2 = rat(n - 1, r - 1) * (rat((n - 1) * r - 2 * n, n) * a0e + quad) - n * I.sum_alpha() + I.epsilon;
    L.chi = rat(n - 1, 12 * (r - 1)) * (rat((2 * n - 1) * r - 3 * n, n) * a0e + quad);
    L.e = (n - 1) * I.alpha0 + n * I.sum_alpha() - (2 * n - 1) * I.epsilon;
    finish(L);
    return L;
}

inline LocalInvariants local_invariants(const IndexRecord& I, const FiberDescriptor& f, const FibrationParams& p) {
    return p.h == 1 ? local_invariants_h1(I, f, p) : local_invariants_h0(I, p);
}

inline GlobalInvariants aggregate(const std::vector<LocalInvariants>& germs, const FibrationParams& p) {
    GlobalInvariants G;
    G.K2 = G.chi = G.e = G.ind_sum = G.sigma = 0;
    for (const auto& L : germs) {
        G.K2 += L.K2;
        G.chi += L.chi;
        G.e += L.e;
        G.sigma += L.sigma;
        if (L.Ind) G.ind_sum += *L.Ind;
    }
    G.germs = germs;
    if (G.chi == 0) throw Error(ErrorCode::LocallyTrivial, "chi = 0, the slope is undefined");
    (void)p;
    G.lambda = G.K2 / G.chi;
    return G;
}

inline Rational slope_equality_check(const GlobalInvariants& G, const FibrationParams& p) {
    return G.K2 - lambda_slope(p) * G.chi - G.ind_sum;
}

inline Rational signature(const LocalInvariants& L) { return L.K2 - 8 * L.chi; }
inline Rational signature(const GlobalInvariants& G) { return G.K2 - 8 * G.chi; }

// Per-germ signature in closed coefficient form, kept to compare with K2 - 8 chi.
inline Rational coefficient_sigma_h1(const IndexRecord& I, const FiberDescriptor& f, const FibrationParams& p) {
    const long n = p.n, r = p.r;
    Rational s = 0;
    for (int k = 1; k <= I.max_k(); ++k) s += n * (rat((n + 1) * (n - 1), 3) * k - 1) * I.alpha(k);
    s += (rat((n - 1) * (n + 1) * r, 3 * n) - 8 * n) * chi_phi(f);
    s += rat((n + 1) * (2 * n - 1), 3 * n) * I.epsilon;
    s += rat((n + 1) * (n - 1) * r, 3 * n) * nu(f);
    s -= rat((n + 1) * (n - 1), 3 * n) * I.alpha0;
    return s;
}

inline std::optional<int> fibration_gonality(const FibrationParams& p, std::optional<int> gon_base = std::nullopt) {
    int gb = gon_base ? *gon_base : (p.h == 0 ? 1 : 2);
    if (p.r >= 2 * p.n * gb) return p.n * gb;
    return std::nullopt;
}

}  // namespace fibcalc
