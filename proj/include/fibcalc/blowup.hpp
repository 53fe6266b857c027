#pragma once

#include "core.hpp"
#include "fiber.hpp"
#include "germ.hpp"

#include <map>
#include <numeric>
#include <string>
#include <vector>

namespace fibcalc {

using BA = std::pair<int, int>;  // (genus b, a) with L^2 = -a n
using UK = std::pair<int, int>;  // (u, k)

struct IndexRecord {
    int n = 0, r = 0, h = 0, m_p = 1;

    std::map<int, long> alpha_nZ, alpha_nZ1;           // by k
    std::map<int, long> alpha_prime, alpha_dprime;     // by k
    long alpha0_plus = 0, alpha0_minus = 0, alpha0 = 0;
    long epsilon = 0;
    std::map<BA, long> j_prime, j_dprime;
    long j_prime_0_2_odd = 0;
    std::map<UK, long> iota_uk, kappa_uk;  // point counts by vertical type and k
    long iota = 0, kappa = 0, iota3 = 0, kappa3 = 0;
    long eta = 0, eta_prime = 0, eta_dprime = 0, eta_bar = 0, eta_hat = 0;
    Rational gamma;
    int delta_cyc = 0;
    std::map<int, long> alpha_tr, alpha_co0, alpha_co1;  // (2k+1 -> 2k+1) pairs by k, n = 2
    long kappa_pairs = 0;  // pairs whose odd point is vertical, weighted by u - 1
    std::vector<long> family_jp01;       // j'^t_{0,1} for families meeting the fiber
    std::vector<long> family_jp02_odd;   // j'^t_{0,2,odd}
    bool triple_fiber = false;
    long forced_alpha0_plus = 0;

    long alpha(int k) const { return get(alpha_nZ, k) + get(alpha_nZ1, k); }
    long sum_alpha() const { return total(alpha_nZ) + total(alpha_nZ1); }
    long sum_k_alpha() const {
        long s = 0;
        for (auto [k, v] : alpha_nZ) s += k * v;
        for (auto [k, v] : alpha_nZ1) s += k * v;
        return s;
    }
    int max_k() const {
        int m = 0;
        for (auto [k, v] : alpha_nZ) if (v) m = std::max(m, k);
        for (auto [k, v] : alpha_nZ1) if (v) m = std::max(m, k);
        return m;
    }
    long jp(int b, int a) const { return get(j_prime, BA{b, a}); }
    long jdp(int b, int a) const { return get(j_dprime, BA{b, a}); }
    long j(int b, int a) const { return jp(b, a) + jdp(b, a); }
    long j_total() const { return total(j_prime) + total(j_dprime); }
    long j_dprime_total() const { return total(j_dprime); }
    long iota_k(int k) const { return weighted(iota_uk, k); }
    long kappa_k(int k) const { return weighted(kappa_uk, k); }
    long sum_pairs() const { return total(alpha_tr) + total(alpha_co0) + total(alpha_co1); }

    template <class M>
    static long get(const M& m, typename M::key_type key) {
        auto it = m.find(key);
        return it == m.end() ? 0 : it->second;
    }
    template <class M>
    static long total(const M& m) {
        long s = 0;
        for (const auto& kv : m) s += kv.second;
        return s;
    }
    static long weighted(const std::map<UK, long>& m, int k) {
        long s = 0;
        for (auto [uk, v] : m)
            if (uk.second == k) s += (uk.first - 1) * v;
        return s;
    }

    bool operator==(const IndexRecord&) const = default;
};

struct DeriveOptions {
    // Count odd points infinitely near to a component, not only points on its proper transforms.
    bool odd_points_infinitely_near = false;
};

struct LedgerEntry {
    std::string curve;
    bool exceptional = false;
    bool in_R = false;
    bool singular = false;
    int genus = 0;
    int self0 = 0;
    std::vector<std::string> point_ids;
    std::vector<std::pair<int, int>> points;  // (k_i, d_i)
    long L2 = 0;
    long a = 0;  // -L^2/n for curves in R
    long RC = 0;
    long t = 0;  // R'.C where the curve appears (R.C for curves not in R)
    int family = -1;
    bool prime = false;
    std::vector<std::vector<int>> columns;  // towers of points on the curve, bottom-up
};

struct CurveLedger {
    FibrationParams params;
    std::vector<LedgerEntry> entries;

    const LedgerEntry* find(const std::string& id) const {
        for (const auto& e : entries)
            if (e.curve == id) return &e;
        return nullptr;
    }
};

namespace detail {

struct Derived {
    Analysis A;
    IndexRecord idx;
    std::vector<int> family_of;  // per curve, -1 if not in R
    int n_families = 0;
};

inline void fail(const std::string& what) { throw Error(ErrorCode::InconsistentForest, what); }

inline Derived derive(const GermSpec& spec, const DeriveOptions& opt) {
    Derived D;
    D.A = analyze(spec);
    Analysis& A = D.A;
    if (!A.complete || !A.violations.empty()) {
        const auto& v = A.violations.front();
        fail("germ fails validation: " + v.rule + (v.node.empty() ? "" : " at " + v.node) + ": " + v.detail);
    }
    const FibrationParams& P = spec.params;
    const FiberDescriptor& F = spec.fiber;
    const int n = P.n;
    IndexRecord& I = D.idx;
    I.n = n;
    I.r = P.r;
    I.h = P.h;
    I.m_p = F.m_p;
    const size_t NC = A.curves.size();

    // Families: connected components of R-curves under meeting at a singular point of R.
    std::vector<int> uf(NC);
    std::iota(uf.begin(), uf.end(), 0);
    std::function<int(int)> root = [&](int x) { return uf[x] == x ? x : uf[x] = root(uf[x]); };
    auto unite = [&](int a, int b) { uf[root(a)] = root(b); };
    for (const auto& e : F.edges)
        for (int a : e.comps)
            for (int b : e.comps)
                if (a != b && A.curves[a].in_R && A.curves[b].in_R) unite(a, b);
    for (const auto& nd : A.nodes) {
        int prev = -1;
        for (auto [c, k] : nd.on) {
            if (!A.curves[c].in_R) continue;
            if (prev >= 0) unite(prev, c);
            prev = c;
        }
        if (A.curves[nd.ecurve].in_R && prev >= 0) unite(prev, nd.ecurve);
    }
    D.family_of.assign(NC, -1);
    std::map<int, int> fam_id;
    for (size_t c = 0; c < NC; ++c) {
        if (!A.curves[c].in_R) continue;
        int rt = root(static_cast<int>(c));
        auto [it, fresh] = fam_id.emplace(rt, static_cast<int>(fam_id.size()));
        D.family_of[c] = it->second;
    }
    const int T = static_cast<int>(fam_id.size());
    D.n_families = T;

    // Singularity indices.
    std::vector<int> node_family(A.nodes.size(), -1);
    for (size_t zi = 0; zi < A.nodes.size(); ++zi) {
        const auto& z = A.nodes[zi];
        for (auto [c, k] : z.on)
            if (A.curves[c].in_R) node_family[zi] = D.family_of[c];
        if (node_family[zi] < 0 && A.curves[z.ecurve].in_R) node_family[zi] = D.family_of[z.ecurve];
        bool involved = node_family[zi] >= 0;
        if (z.cls == MultClass::NZ) ++I.alpha_nZ[z.k];
        else ++I.alpha_nZ1[z.k];
        if (involved) ++I.alpha_dprime[z.k];
        else ++I.alpha_prime[z.k];
        if (z.u >= 1) {
            if (z.cls == MultClass::NZ) {
                ++I.iota_uk[{z.u, z.k}];
                I.iota += z.u - 1;
                if (z.u == 3) ++I.iota3;
            } else {
                ++I.kappa_uk[{z.u, z.k}];
                I.kappa += z.u - 1;
                if (z.u == 3) ++I.kappa3;
            }
        }
    }

    // j indices, epsilon, families.
    std::vector<long> fam_j(T, 0), fam_jp(T, 0), fam_jdp01(T, 0), fam_jp01(T, 0), fam_jp02odd(T, 0);
    for (size_t c = 0; c < NC; ++c) {
        const Curve& cv = A.curves[c];
        if (!cv.in_R) continue;
        long a = -A.L2[c] / n;
        int t = D.family_of[c];
        ++fam_j[t];
        if (cv.exceptional()) {
            ++I.j_dprime[{0, static_cast<int>(a)}];
            if (a == 1) ++fam_jdp01[t];
        } else {
            ++I.j_prime[{cv.genus, static_cast<int>(a)}];
            ++fam_jp[t];
            if (cv.genus == 0 && a == 1) ++fam_jp01[t];
            if (cv.genus == 0 && a == 2) {
                bool odd = false;
                for (size_t zi = 0; zi < A.nodes.size(); ++zi) {
                    const auto& z = A.nodes[zi];
                    bool on_c = z.mult_of(static_cast<int>(c)) > 0;
                    if (!on_c && opt.odd_points_infinitely_near) {
                        for (int anc = z.parent; anc >= 0 && !on_c; anc = A.nodes[anc].parent)
                            on_c = A.nodes[anc].mult_of(static_cast<int>(c)) > 0;
                    }
                    if (on_c && z.m % 2 == 1) odd = true;
                }
                if (odd) {
                    ++I.j_prime_0_2_odd;
                    ++fam_jp02odd[t];
                }
            }
        }
        if (cv.genus == 0 && a == 1) ++I.epsilon;
    }
    I.eta = T;
    for (int t = 0; t < T; ++t) {
        if (fam_jp[t] > 0) {
            ++I.eta_prime;
            I.family_jp01.push_back(fam_jp01[t]);
            I.family_jp02_odd.push_back(fam_jp02odd[t]);
        } else {
            ++I.eta_dprime;
            if (fam_j[t] == fam_jdp01[t]) ++I.eta_bar;
        }
    }
    I.eta_hat = I.eta_dprime - I.eta_bar;
    for (auto [ba, v] : I.j_prime) I.alpha0_minus += (2L * ba.first - 2) * v;
    for (auto [ba, v] : I.j_dprime) I.alpha0_minus += (2L * ba.first - 2) * v;
    I.alpha0_minus += 2 * I.epsilon;
    I.alpha0_plus = declared_alpha0_plus(spec.horizontal);
    I.alpha0 = I.alpha0_plus + I.alpha0_minus;
    I.forced_alpha0_plus = A.forced_alpha0_plus;

    // gamma per family.
    std::vector<Rational> fam_gamma(T, Rational(0));
    for (size_t c = 0; c < NC; ++c) {
        const Curve& cv = A.curves[c];
        if (!cv.in_R || cv.exceptional()) continue;
        int t = D.family_of[c];
        fam_gamma[t] += Rational(A.RC[c]) / n;
        if (cv.singular) {
            for (auto [z, k] : cv.points)
                if (k == 2) fam_gamma[t] -= A.nodes[z].m / n;
        }
    }
    for (int t = 0; t < T; ++t) {
        if (fam_jp[t] > 0) continue;
        int first = -1;
        for (size_t zi = 0; zi < A.nodes.size(); ++zi) {
            const auto& z = A.nodes[zi];
            if (A.curves[z.ecurve].in_R && D.family_of[z.ecurve] == t && z.u == 0) {
                if (first >= 0) fail("family without fiber components has two initial curves");
                first = static_cast<int>(zi);
            }
        }
        if (first < 0) fail("family without fiber components has no initial curve");
        fam_gamma[t] = A.nodes[first].m / n;
    }
    I.gamma = 0;
    for (const auto& g : fam_gamma) I.gamma += g;

    // Cycles of the graph whose edges are the nZ points shared by curves of a family.
    {
        std::vector<int> uf2(NC);
        std::iota(uf2.begin(), uf2.end(), 0);
        std::function<int(int)> r2 = [&](int x) { return uf2[x] == x ? x : uf2[x] = r2(uf2[x]); };
        std::vector<long> edges(T, 0), comps(T, 0);
        for (const auto& z : A.nodes) {
            if (z.cls != MultClass::NZ || z.u < 2) continue;
            std::vector<int> cs;
            for (auto [c, k] : z.on)
                if (A.curves[c].in_R) cs.push_back(c);
            std::sort(cs.begin(), cs.end());
            for (size_t i = 0; i + 1 < cs.size(); ++i) {
                ++edges[D.family_of[cs[i]]];
                uf2[r2(cs[i])] = r2(cs[i + 1]);
            }
        }
        std::set<int> seen;
        for (size_t c = 0; c < NC; ++c)
            if (A.curves[c].in_R && seen.insert(r2(static_cast<int>(c))).second) ++comps[D.family_of[c]];
        long cycles = 0;
        for (int t = 0; t < T; ++t) cycles += edges[t] - fam_j[t] + comps[t];
        if (cycles > 1) fail("more than one cycle among curves of R");
        I.delta_cyc = static_cast<int>(cycles);
        if (P.h == 1) {
            bool c1 = (F.kind == FiberKind::I && F.k >= 1) || F.kind == FiberKind::II ||
                      F.kind == FiberKind::III || F.kind == FiberKind::IV;
            bool c2 = true;
            for (size_t c = 0; c < F.components.size(); ++c) c2 = c2 && A.curves[c].in_R;
            bool c3 = I.iota3 == 0 && I.kappa3 == 0;
            bool c4 = true;
            if ((F.kind == FiberKind::I && F.k == 1) || F.kind == FiberKind::II) {
                c4 = false;
                for (auto [z, k] : A.curves[0].points)
                    if (k == 2 && A.nodes[z].cls == MultClass::NZ_PLUS_1) c4 = true;
            }
            int expected = (c1 && c2 && c3 && c4) ? 1 : 0;
            if (expected != I.delta_cyc)
                fail("cycle detection disagrees with the fiber-type conditions (found " +
                     std::to_string(I.delta_cyc) + ")");
        }
    }

    // (2k+1 -> 2k+1) pairs, n = 2.
    if (n == 2) {
        for (size_t xi = 0; xi < A.nodes.size(); ++xi) {
            const auto& x = A.nodes[xi];
            if (x.cls != MultClass::NZ_PLUS_1) continue;
            const auto& pts = A.curves[x.ecurve].points;
            if (pts.size() != 1) continue;
            const auto& y = A.nodes[pts[0].first];
            if (y.m != x.m + 1) fail("odd point " + x.id + " is followed by multiplicity " + std::to_string(y.m));
            int kind = 0;  // 0 tr, 1 co0, 2 co1
            for (auto [c, k] : x.on) {
                if (y.mult_of(c) == 0) continue;
                kind = std::max(kind, A.curves[c].in_R ? 2 : 1);
            }
            auto& bucket = kind == 0 ? I.alpha_tr : kind == 1 ? I.alpha_co0 : I.alpha_co1;
            ++bucket[x.k];
            if (x.u >= 2) I.kappa_pairs += x.u - 1;
        }
    }

    // Divisibility of the covering fiber by 3 (curves outside R carry their own multiplicity).
    if (n == 3) {
        bool all = true;
        for (size_t c = 0; c < NC; ++c)
            if (!A.curves[c].in_R && (F.m_p * A.curves[c].mu) % 3 != 0) all = false;
        I.triple_fiber = all;
    }
    return D;
}

inline bool mI1_or_II(const FiberDescriptor& f) {
    return (f.kind == FiberKind::I && f.k == 1) || f.kind == FiberKind::II;
}

// Identities that hold for every germ arising from a branch curve; returns (name, lhs, rhs).
inline std::vector<std::tuple<std::string, Rational, Rational>> identity_sides(const IndexRecord& I,
                                                                                const FiberDescriptor& f) {
    std::vector<std::tuple<std::string, Rational, Rational>> out;
    const long n = I.n;
    Rational lhs = IndexRecord::total(I.alpha_dprime);
    Rational rhs;
    if (I.h == 1) {
        rhs = I.eta_dprime;
        for (auto [ba, v] : I.j_prime) {
            long a = ba.second;
            if (ba.first == 1) rhs += a * n * v;
            else if (ba.first == 0) rhs += (a * n - 2 - (mI1_or_II(f) ? 1 : 0)) * v;
        }
        for (auto [ba, v] : I.j_dprime) rhs += (ba.second * n - 1) * v;
        rhs -= I.iota + I.kappa;
    } else {
        for (auto [ba, v] : I.j_prime) rhs += (ba.second * n - 2) * v;
        for (auto [ba, v] : I.j_dprime) rhs += (ba.second * n - 2) * v;
        rhs += 2 * I.eta - I.kappa;
    }
    out.emplace_back("involved-point count", lhs, rhs);

    Rational kl = 0, kr = I.gamma;
    for (auto [k, v] : I.alpha_dprime) kl += k * v;
    for (auto [ba, v] : I.j_prime) kr += ba.second * v;
    for (auto [ba, v] : I.j_dprime) kr += ba.second * v;
    for (auto [k, v] : I.alpha_nZ1) kr += k * v;
    std::set<int> ks;
    for (auto [uk, v] : I.iota_uk) ks.insert(uk.second);
    for (auto [uk, v] : I.kappa_uk) ks.insert(uk.second);
    for (int k : ks) kr -= k * (I.iota_k(k) + I.kappa_k(k));
    out.emplace_back("weighted involved-point count", kl, kr);

    Rational cr = I.j_total() - I.eta + (I.h == 1 ? I.delta_cyc : 0);
    out.emplace_back("cycle rank", Rational(I.iota), cr);
    out.emplace_back("epsilon count", Rational(I.epsilon), Rational(I.j(0, 1)));
    Rational am = 2 * I.epsilon;
    for (auto [ba, v] : I.j_prime) am += (2L * ba.first - 2) * v;
    for (auto [ba, v] : I.j_dprime) am += (2L * ba.first - 2) * v;
    out.emplace_back("alpha0 minus", Rational(I.alpha0_minus), am);
    if (n == 2) {
        out.emplace_back("odd pair count", Rational(I.jdp(0, 1)), Rational(I.sum_pairs()));
        out.emplace_back("bar eta count", Rational(I.eta_bar),
                         Rational(IndexRecord::total(I.alpha_tr) + IndexRecord::total(I.alpha_co0)));
    }
    return out;
}

inline void check_identities(const IndexRecord& I, const FiberDescriptor& f) {
    for (const auto& [name, l, r] : identity_sides(I, f))
        if (l != r) fail(name + " identity fails: " + str(l) + " != " + str(r));
}

}  // namespace detail

inline IndexRecord derive_indices(const GermSpec& spec, const DeriveOptions& opt = {}) {
    auto D = detail::derive(spec, opt);
    detail::check_identities(D.idx, spec.fiber);
    return D.idx;
}

inline CurveLedger curve_ledger(const GermSpec& spec) {
    auto D = detail::derive(spec, {});
    detail::check_identities(D.idx, spec.fiber);
    const auto& A = D.A;
    const int n = spec.params.n;
    CurveLedger L;
    L.params = spec.params;
    for (size_t c = 0; c < A.curves.size(); ++c) {
        const auto& cv = A.curves[c];
        LedgerEntry e;
        e.curve = cv.name;
        e.exceptional = cv.exceptional();
        e.in_R = cv.in_R;
        e.singular = cv.singular;
        e.genus = cv.genus;
        e.self0 = cv.self0;
        for (auto [z, k] : cv.points) {
            e.point_ids.push_back(A.nodes[z].id);
            e.points.push_back({k, A.nodes[z].m / n});
        }
        e.L2 = A.L2[c];
        e.family = D.family_of[c];
        e.prime = !cv.exceptional();
        if (cv.in_R) {
            e.a = -e.L2 / n;
            e.RC = A.RC[c];
            e.t = e.RC - cv.self0;
        } else if (cv.exceptional()) {
            e.t = A.nodes[cv.node].m;
        } else {
            e.t = A.rh[c];
            for (size_t i = 0; i < spec.fiber.components.size(); ++i)
                if (A.curves[i].in_R) e.t += component_intersection(spec.fiber, static_cast<int>(i), static_cast<int>(c));
        }
        // Towers: a column starts at the first point of the curve in a chain of infinitely near points.
        std::set<int> on_curve;
        for (auto [z, k] : cv.points) on_curve.insert(z);
        int singular_root = -1;
        for (auto [z, k] : cv.points)
            if (k == 2) singular_root = z;
        for (auto [z, k] : cv.points) {
            if (z == singular_root) continue;
            int par = A.nodes[z].parent;
            bool starts = par < 0 || !on_curve.count(par) || par == singular_root ||
                          (cv.exceptional() && par == cv.node);
            if (!starts) continue;
            std::vector<int> col;
            int cur = z;
            while (cur >= 0) {
                col.push_back(A.nodes[cur].m);
                int next = -1;
                for (int ch : A.nodes[cur].children)
                    if (on_curve.count(ch)) next = ch;
                cur = next;
            }
            e.columns.push_back(col);
        }
        if (singular_root >= 0) {
            long d1 = A.nodes[singular_root].m / n;
            long rc = cv.in_R ? e.RC : e.t;
            e.t = cv.in_R ? rc - 2L * n * d1 + 4 : rc - 2L * n * d1;
        }
        std::stable_sort(e.columns.begin(), e.columns.end(),
                         [](const auto& a, const auto& b) { return a.size() > b.size(); });
        L.entries.push_back(e);
    }
    return L;
}

}  // namespace fibcalc
