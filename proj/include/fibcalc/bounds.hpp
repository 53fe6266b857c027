#pragma once

#include "blowup.hpp"
#include "core.hpp"
#include "fiber.hpp"
#include "germ.hpp"
#include "invariants.hpp"

#include <functional>
#include <set>
#include <string>
#include <vector>

namespace fibcalc {

struct AuditConstants {
    Rational mu, mu_prime, A_n, B_n, C_n;
    int delta = 0;
    std::function<Rational(long)> Q;  // h = 0 only
};

inline bool is_triple_403(const FibrationParams& p, const IndexRecord& I) {
    return p.g == 4 && p.h == 0 && p.n == 3 && I.triple_fiber;
}

inline AuditConstants audit_constants(const FibrationParams& p, bool triple_fiber = false) {
    AuditConstants c;
    c.mu = mu_threshold(p, triple_fiber);
    const long n = p.n, r = p.r;
    if (p.h == 1) {
        c.mu_prime = rat((n - 1) * (n + 1), 12) * c.mu;
        c.A_n = (n - 1) - rat((n - 1) * (2 * n - 1), 12 * n) * c.mu;
        c.C_n = 12 * n - (rat(r * (n - 1) * (n + 1), 12 * n) + n) * c.mu;
        c.B_n = 0;
        c.Q = [](long) { return Rational(0); };
        return c;
    }
    c.delta = n == 3 ? ((r % 6 == 0) ? 0 : 1) : ((p.g % 2 == 0) ? 1 : 0);
    c.mu_prime = rat(n - 1, 12 * (r - 1)) * c.mu;
    c.A_n = (n - 1) - rat(r * (2 * n - 1) - 3 * n, n) * c.mu_prime;
    c.B_n = n - rat((n + 1) * (r * r - c.delta * n * n), 4 * n) * c.mu_prime;
    c.C_n = 0;
    Rational mp = c.mu_prime;
    int delta = c.delta;
    c.Q = [mp, n, r, delta](long k) {
        Rational x = Rational(k) - rat(r, 2 * n);
        return Rational(mp * (n * (n + 1) * x * x - rat(n * (n + 1) * delta, 4)));
    };
    return c;
}

enum class Relation { Eq, Le, Ge };

struct AuditEntry {
    std::string name;
    Relation rel = Relation::Eq;
    Rational lhs, rhs;
    Rational slack;  // >= 0 when the entry holds; identities hold exactly at 0
    bool pass = true;
    std::string note;
};

struct LemmaAuditReport {
    std::vector<AuditEntry> entries;

    bool all_pass() const {
        for (const auto& e : entries)
            if (!e.pass) return false;
        return true;
    }
    const AuditEntry* find(const std::string& name) const {
        for (const auto& e : entries)
            if (e.name == name) return &e;
        return nullptr;
    }
    std::vector<std::string> failures() const {
        std::vector<std::string> out;
        for (const auto& e : entries)
            if (!e.pass) out.push_back(e.name);
        return out;
    }
};

namespace detail {

inline AuditEntry entry(const std::string& name, Relation rel, const Rational& lhs, const Rational& rhs) {
    AuditEntry e;
    e.name = name;
    e.rel = rel;
    e.lhs = lhs;
    e.rhs = rhs;
    switch (rel) {
    case Relation::Eq: e.slack = rhs - lhs; e.pass = e.slack == 0; break;
    case Relation::Le: e.slack = rhs - lhs; e.pass = e.slack >= 0; break;
    case Relation::Ge: e.slack = lhs - rhs; e.pass = e.slack >= 0; break;
    }
    return e;
}

inline bool kind_in(const FiberDescriptor& f, std::initializer_list<FiberKind> kinds) {
    for (auto k : kinds)
        if (f.kind == k) return true;
    return false;
}

}  // namespace detail

// every inequality and identity on derived indices that valid germs satisfy
inline LemmaAuditReport audit_lemmas(const IndexRecord& I, const FiberDescriptor& f, const FibrationParams& p) {
    using detail::entry;
    LemmaAuditReport rep;
    auto& E = rep.entries;
    const long n = p.n, r = p.r, m = f.m_p;
    const bool h1 = p.h == 1;
    const Rational rn = rat(r, n);
    const long top = r / (n * m);

    E.push_back(entry("multiplicity-bound", Relation::Le, Rational(I.max_k()), Rational(top)));

    {
        long weight = I.iota3 + I.kappa3;
        for (auto [uk, v] : I.iota_uk)
            if (uk.first >= 4) weight += 2 * v;
        for (auto [uk, v] : I.kappa_uk)
            if (uk.first >= 4) weight += 2 * v;
        E.push_back(entry("vertical-type-pattern", Relation::Le, Rational(weight), Rational(1)));
    }

    for (const auto& [name, l, rr] : detail::identity_sides(I, f)) E.push_back(entry(name + " identity", Relation::Eq, l, rr));

    Rational co_weight = 0;
    for (auto [k, v] : I.alpha_co0) co_weight += 2 * k * v;
    for (auto [k, v] : I.alpha_co1) co_weight += 2 * k * v;

    if (h1) {
        Rational beta = 0;
        if (n != 2) {
            long w = 0;
            if (f.kind == FiberKind::II) w = n - 7;
            if (f.kind == FiberKind::III) w = -(n + 1);
            if (f.kind == FiberKind::IV) w = -2;
            beta = w * I.iota3;
        } else {
            beta = co_weight;
        }
        Rational rhs = (rat(1) - rat(1, m)) * r + (n - 2) * (I.iota + 2 * I.kappa) + beta;
        E.push_back(entry("horizontal-ramification-lower-bound", Relation::Ge, Rational(I.alpha0_plus), rhs));
    } else {
        Rational rhs = (n - 2) * (I.j_total() - I.eta + 2 * I.kappa) + (n == 2 ? co_weight : Rational(0));
        E.push_back(entry("horizontal-ramification-lower-bound", Relation::Ge, Rational(I.alpha0_plus), rhs));
    }
    E.push_back(entry("forced-ramification", Relation::Ge, Rational(I.alpha0_plus), Rational(I.forced_alpha0_plus)));

    const bool mI1_II = detail::mI1_or_II(f);
    if (h1) {
        Rational rhs = (I.eta_prime != 0 ? rn - (n == 2 ? I.jp(0, 1) : 0) - (mI1_II ? 1 : 0) : Rational(0)) +
                       (rn - 1) * I.eta_dprime;
        E.push_back(entry("gamma-upper-bound", Relation::Le, I.gamma, rhs));

        long top_odd = IndexRecord::get(I.alpha_nZ1, static_cast<int>(top));
        if (n >= 3) {
            E.push_back(entry("top-index-vanishing", Relation::Eq, Rational(top_odd), Rational(0)));
        } else {
            E.push_back(entry("top-index-vanishing", Relation::Eq, Rational(I.kappa_k(static_cast<int>(top))), Rational(0)));
        }

        Rational lhs = 0;
        for (auto [k, v] : I.alpha_nZ1) lhs += k * v;
        std::set<int> ks;
        for (auto [uk, v] : I.kappa_uk) ks.insert(uk.second);
        for (int k : ks) lhs -= k * I.kappa_k(k);
        Rational rhs1 = (rn - 1) * (I.j_dprime_total() - I.kappa) + (rn - 2) * I.kappa3 + top_odd;
        E.push_back(entry("odd-index-weight-bound", Relation::Le, lhs, rhs1));
        if (n == 2) {
            Rational pk = 0;
            for (const auto* mp : {&I.alpha_tr, &I.alpha_co0, &I.alpha_co1})
                for (auto [k, v] : *mp) pk += k * v;
            long jdp_a2 = 0;
            for (auto [ba, v] : I.j_dprime)
                if (ba.first == 0 && ba.second >= 2) jdp_a2 += v;
            Rational rhs2 = pk + (rn - 1) * (jdp_a2 - I.kappa) + (rn - 2) * I.kappa3 + top_odd;
            // a pair whose odd point is itself vertical (the type III tangency) is also counted in kappa
            rhs2 += (rn - 2) * I.kappa_pairs;
            AuditEntry e2 = entry("odd-index-weight-bound (n=2)", Relation::Le, lhs, rhs2);
            if (I.kappa_pairs != 0) e2.note = "includes (r/2 - 2) for each vertical odd pair point";
            E.push_back(e2);

            Rational s = 0;
            for (auto [ba, v] : I.j_prime)
                if (ba.second >= 2) s += (ba.second - 1) * v;
            for (auto [ba, v] : I.j_dprime)
                if (ba.second >= 2) s += (ba.second - 1) * v;
            E.push_back(entry("kappa-bound", Relation::Le, Rational(I.kappa), rat(2, 3) * s - rat(2, 3) * top_odd));
        }
    } else if (n == 2) {
        Rational s = 0;
        for (auto [ba, v] : I.j_prime)
            if (ba.first == 0 && ba.second >= 2) s += (ba.second - 1) * v;
        for (auto [ba, v] : I.j_dprime)
            if (ba.first == 0 && ba.second >= 2) s += (ba.second - 1) * v;
        E.push_back(entry("kappa-bound", Relation::Le, Rational(I.kappa), rat(2, 3) * s));
    }

    // Counts of (-1)-curves among fiber components, per family.
    if (h1 && (n == 2 || n == 3)) {
        const auto& fam = n == 3 ? I.family_jp01 : I.family_jp02_odd;
        long mx = 0;
        for (long v : fam) mx = std::max(mx, v);
        // every fiber component is counted in j'
        const bool allR = IndexRecord::total(I.j_prime) == static_cast<long>(f.components.size());
        const Rational jp01 = I.jp(0, 1), odd = I.j_prime_0_2_odd;
        const bool star_like = detail::kind_in(f, {FiberKind::IV, FiberKind::IStar, FiberKind::IIStar,
                                                   FiberKind::IIIStar, FiberKind::IVStar});
        AuditEntry e;
        if (mx <= 2) {
            Rational lhs = n == 3 ? Rational(jp01 / 2) : Rational(jp01 + odd / 2);
            e = entry("component-minus-one-count", Relation::Le, lhs, Rational(I.eta_prime - I.delta_cyc));
        } else if (mx == 3) {
            Rational lhs = n == 3 ? Rational(jp01 / 3) : Rational(jp01 + odd / 3);
            e = entry("component-minus-one-count", Relation::Le, lhs, Rational(I.eta_prime));
            if (!star_like || I.delta_cyc != 0) {
                e.pass = false;
                e.note = "three in one family needs a fiber of type IV, I*_k, II*, III*, IV* and no cycle";
            }
        } else {
            bool ok = mx == 4 && f.kind == FiberKind::IStar && allR && I.eta_prime == 1 && I.delta_cyc == 0 &&
                      (n == 3 ? I.jp(0, 1) == 4 : (I.jp(0, 1) == 0 && I.j_prime_0_2_odd == 4));
            e = entry("component-minus-one-count", Relation::Le, Rational(mx), Rational(4));
            if (!ok) {
                e.pass = false;
                e.note = "four in one family only on I*_k with every component in R";
            }
        }
        E.push_back(e);
    }

    // (-1)-curves among exceptional curves.
    if (h1 && n == 3) {
        Rational rhs = 2 * I.eta_dprime;
        for (auto [ba, v] : I.j_prime) {
            if (ba.first == 1) rhs += 2 * ba.second * v;
            if (ba.first == 0 && ba.second >= 2) rhs += (2 * ba.second - 2) * v;
        }
        for (auto [ba, v] : I.j_dprime)
            if (ba.second >= 2) rhs += (2 * ba.second - 1) * v;
        E.push_back(entry("exceptional-minus-one-count", Relation::Le, Rational(I.jdp(0, 1)), rhs));
    } else if (h1 && n == 2) {
        // genus-one components carry up to a odd points each
        Rational rhs = Rational(I.j_prime_0_2_odd) + I.eta_hat;
        for (auto [ba, v] : I.j_prime) {
            if (ba.first == 0 && ba.second >= 3) rhs += (ba.second - 1) * v;
            if (ba.first == 1) rhs += ba.second * v;
        }
        for (auto [ba, v] : I.j_dprime)
            if (ba.second >= 3) rhs += (ba.second - 2) * v;
        E.push_back(entry("exceptional-minus-one-count", Relation::Le, Rational(IndexRecord::total(I.alpha_co1)), rhs));
    } else if (!h1 && n == 3) {
        Rational rhs = 2 * I.eta + 1;
        for (auto [ba, v] : I.j_prime)
            if (ba.first == 0 && ba.second >= 2) rhs += (2 * ba.second - 1) * v;
        for (auto [ba, v] : I.j_dprime)
            if (ba.first == 0 && ba.second >= 2) rhs += (2 * ba.second - 1) * v;
        AuditEntry e = entry("exceptional-minus-one-count", Relation::Le, Rational(I.j(0, 1)), rhs);
        if (e.pass && e.slack == 0) {
            bool ok = I.triple_fiber && r % 9 == 6 && I.j_total() == I.j(0, 1) && I.kappa == 1 &&
                      Rational(I.alpha0_plus) >= rat(5 * (r - 6), 9) + I.j_total() - I.eta + 2 * I.kappa;
            if (!ok) {
                e.pass = false;
                e.note = "equality needs a triple fiber, r in 9Z+6, only (-3)-curves, kappa = 1 and enough ramification";
            }
        }
        E.push_back(e);
    } else if (!h1 && n == 2) {
        Rational rhs = Rational(I.eta_hat) + 2 * I.eta_prime - I.jp(0, 1);
        for (auto [ba, v] : I.j_prime)
            if (ba.first == 0 && ba.second >= 3) rhs += (ba.second - 2) * v;
        for (auto [ba, v] : I.j_dprime)
            if (ba.first == 0 && ba.second >= 3) rhs += (ba.second - 2) * v;
        E.push_back(entry("exceptional-minus-one-count", Relation::Le, Rational(IndexRecord::total(I.alpha_co1)), rhs));
    }

    if (h1 && n == 3 && I.jp(0, 1) != 0)
        E.push_back(entry("elliptic-euler-lower-bound", Relation::Ge, chi_phi(f), rat(I.jp(0, 1) + 1, 12)));
    if (h1 && n == 2 && detail::kind_in(f, {FiberKind::II, FiberKind::III, FiberKind::IV}))
        E.push_back(entry("elliptic-euler-lower-bound", Relation::Ge, chi_phi(f),
                          rat(2 * I.jp(0, 1) + I.jp(0, 2) + I.jp(0, 3) + 1, 12)));
    return rep;
}

inline Rational bound_audit(const IndexRecord& I, const FiberDescriptor& f, const FibrationParams& p) {
    require_bound_scope(p);
    LocalInvariants L = local_invariants(I, f, p);
    return L.e - mu_threshold(p, is_triple_403(p, I)) * L.chi;
}

enum class ExtremalFamily { H1_I, H1_II_n3, H1_III_n2, H0_TRIPLE_403 };

inline const char* family_name(ExtremalFamily f) {
    switch (f) {
    case ExtremalFamily::H1_I: return "H1_I";
    case ExtremalFamily::H1_II_n3: return "H1_II_n3";
    case ExtremalFamily::H1_III_n2: return "H1_III_n2";
    case ExtremalFamily::H0_TRIPLE_403: return "H0_TRIPLE_403";
    }
    return "?";
}

inline bool parse_family(const std::string& s, ExtremalFamily& out) {
    for (auto f : {ExtremalFamily::H1_I, ExtremalFamily::H1_II_n3, ExtremalFamily::H1_III_n2,
                   ExtremalFamily::H0_TRIPLE_403})
        if (s == family_name(f)) {
            out = f;
            return true;
        }
    return false;
}

inline GermSpec extremal_germ(const FibrationParams& p, ExtremalFamily family, int l = 1) {
    auto inapplicable = [&](const std::string& why) { throw Error(ErrorCode::InapplicableFamily, why); };
    auto mk = [](int m, std::vector<CurveRef> on = {}, std::vector<ForestNode> ch = {}) {
        ForestNode x;
        x.m = m;
        x.on = std::move(on);
        x.children = std::move(ch);
        return x;
    };
    GermSpec s;
    s.params = p;
    const int r = p.r;
    if (family != ExtremalFamily::H0_TRIPLE_403 && l < 1) inapplicable("l must be >= 1");
    switch (family) {
    case ExtremalFamily::H1_I: {
        if (p.h != 1 || !(p.n >= 4 || (p.n == 3 && p.g == 4))) inapplicable("needs h = 1 and n >= 4, or (n,g) = (3,4)");
        s.label = "chain of top points";
        s.fiber = standard_fiber(FiberKind::Smooth);
        ForestNode top = mk(r);
        for (int i = 1; i < l; ++i) top = mk(r, {}, {top});
        top.on = {{"C0", 1}};
        s.forest = {top};
        break;
    }
    case ExtremalFamily::H1_II_n3: {
        if (p.h != 1 || p.n != 3 || p.g <= 4) inapplicable("needs h = 1, n = 3, g > 4");
        s.label = "n=3 two-curve configuration";
        s.fiber = standard_fiber(FiberKind::Smooth);
        ForestNode y = mk(r - 2, {}, {mk(r - 3), mk(3, {{"E0", 1}})});
        s.forest = {mk(r - 2, {{"C0", 1}}, {y})};
        break;
    }
    case ExtremalFamily::H1_III_n2: {
        if (p.h != 1 || p.n != 2 || p.g < 3) inapplicable("needs h = 1, n = 2, g >= 3");
        s.label = "alternating odd chain";
        s.fiber = standard_fiber(FiberKind::Smooth);
        ForestNode top = mk(r - 1, {}, {mk(r)});
        for (int i = 1; i < l; ++i) top = mk(r - 1, {}, {mk(r, {}, {top})});
        top.on = {{"C0", 1}};
        s.forest = {top};
        break;
    }
    case ExtremalFamily::H0_TRIPLE_403: {
        if (!(p.g == 4 && p.h == 0 && p.n == 3)) inapplicable("needs (g,h,n) = (4,0,3)");
        s.label = "triple fiber";
        s.fiber = standard_fiber(FiberKind::RuledLine);
        s.in_R = {"C0"};
        ForestNode x2 = mk(4, {{"C0", 1}}, {mk(3, {{"C0", 1}}), mk(3, {{"E0", 1}})});
        s.forest = {mk(4, {{"C0", 1}}, {x2})};
        break;
    }
    }
    s.horizontal.alpha0_plus = forced_alpha0_plus(s);
    return canonical_form(s);
}

inline bool extremality_classifier(const GermSpec& spec) {
    require_bound_scope(spec.params);
    IndexRecord I = derive_indices(spec);
    LocalInvariants L = local_invariants(I, spec.fiber, spec.params);
    if (L.chi == 0) return false;
    return L.e - mu_threshold(spec.params, is_triple_403(spec.params, I)) * L.chi == 0;
}

}  // namespace fibcalc
