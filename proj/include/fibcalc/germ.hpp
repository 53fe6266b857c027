#pragma once

#include "core.hpp"
#include "fiber.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <string>
#include <vector>

namespace fibcalc {

struct CurveRef {
    std::string curve;
    int mult = 1;

    bool operator==(const CurveRef&) const = default;
};

struct ForestNode {
    std::string id;
    int m = 0;
    std::vector<CurveRef> on;  // curves through the point besides the parent's exceptional curve
    std::vector<ForestNode> children;

    bool operator==(const ForestNode&) const = default;
};

struct HorizontalData {
    std::vector<int> branches;  // ramification indices over p
    std::optional<long> alpha0_plus;

    bool operator==(const HorizontalData&) const = default;
};

struct GermSpec {
    std::string label;
    FibrationParams params;
    FiberDescriptor fiber;
    std::vector<std::string> in_R;
    std::vector<ForestNode> forest;
    HorizontalData horizontal;

    bool operator==(const GermSpec&) const = default;
};

inline long declared_alpha0_plus(const HorizontalData& h) {
    if (h.alpha0_plus) return *h.alpha0_plus;
    long s = 0;
    for (int e : h.branches) s += e - 1;
    return s;
}

struct Violation {
    std::string rule;
    std::string node;  // node id, or empty for germ-level problems
    std::string detail;
};

using ValidationReport = std::vector<Violation>;

namespace detail {

struct Curve {
    std::string name;
    int comp = -1;  // fiber component index
    int node = -1;  // creating node, for exceptional curves
    bool in_R = false;
    int genus = 0;  // geometric genus
    int self0 = 0;  // self-intersection on the surface where the curve first appears
    long mu = 0;    // multiplicity in the total transform of the reduced fiber
    bool singular = false;
    std::vector<std::pair<int, int>> points;  // (node, local multiplicity of the curve)

    bool exceptional() const { return node >= 0; }
};

struct Node {
    std::string id;
    int m = 0;
    int parent = -1;
    int depth = 0;
    std::vector<int> children;
    std::vector<std::pair<int, int>> on;  // (curve, mult), parent's exceptional curve included
    MultClass cls = MultClass::NZ;
    int k = 0;
    int vertical = 0;
    int h = 0;
    int u = 0;
    int ecurve = -1;
    std::map<std::pair<int, int>, int> pair_I;

    int mult_of(int curve) const {
        for (auto [c, mu] : on)
            if (c == curve) return mu;
        return 0;
    }
};

struct Analysis {
    std::vector<Curve> curves;
    std::vector<Node> nodes;
    std::vector<int> roots;
    ValidationReport violations;
    bool structural_ok = false;
    bool complete = false;  // every stage ran
    std::vector<long> lb;
    std::vector<long> rh;
    std::vector<long> residual;
    std::vector<long> RC;  // R.C computed from intersections, R-curves only
    std::vector<long> L2;
    long forced_alpha0_plus = 0;
};

inline std::pair<int, int> ordered(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

// Choose R_h . Theta for components not in R: degree sum r/m_p, n | R.Theta, minimal forced ramification.
inline std::optional<std::pair<std::vector<long>, long>> distribute_degree(
    const FiberDescriptor& f, int n, long target, const std::vector<int>& free_comps,
    const std::vector<long>& lower, const std::vector<long>& vertical_part) {
    if (target < 0) return std::nullopt;
    const long INF = 1L << 60;
    size_t J = free_comps.size();
    // best[j][s]: minimal cost using components j.. with remaining weighted sum s.
    std::vector<std::vector<long>> best(J + 1, std::vector<long>(target + 1, INF));
    std::vector<std::vector<long>> choice(J + 1, std::vector<long>(target + 1, -1));
    best[J][0] = 0;
    for (size_t jj = J; jj-- > 0;) {
        int c = free_comps[jj];
        long mu = f.components[c].multiplicity;
        long w = static_cast<long>(f.m_p) * mu - 1;
        for (long s = 0; s <= target; ++s) {
            for (long x = lower[jj]; mu * x <= s; ++x) {
                if (((x + vertical_part[jj]) % n + n) % n != 0) continue;
                long rest = best[jj + 1][s - mu * x];
                if (rest >= INF) continue;
                long cost = rest + w * (x - lower[jj]);
                if (cost < best[jj][s]) {
                    best[jj][s] = cost;
                    choice[jj][s] = x;
                }
            }
        }
    }
    if (best[0][target] >= INF) return std::nullopt;
    std::vector<long> xs(J);
    long s = target;
    for (size_t jj = 0; jj < J; ++jj) {
        xs[jj] = choice[jj][s];
        s -= f.components[free_comps[jj]].multiplicity * xs[jj];
    }
    return std::pair{xs, best[0][target]};
}

inline Analysis analyze(const GermSpec& spec) {
    Analysis A;
    auto& V = A.violations;
    auto report = [&](const std::string& rule, const std::string& node, const std::string& detail) {
        V.push_back({rule, node, detail});
    };
    const FibrationParams& P = spec.params;
    const FiberDescriptor& F = spec.fiber;
    const int n = P.n;

    for (const auto& msg : check_fiber(F, P.h)) report("FiberDescriptor", "", msg);
    if (!V.empty()) return A;
    if (P.r % F.m_p != 0 || (P.r / F.m_p) % n != 0)
        report("MultipleFiberDegree", "", "n must divide r/m_p");
    const long rm = P.r / F.m_p;

    for (const auto& c : F.components) {
        Curve cv;
        cv.name = c.id;
        cv.comp = static_cast<int>(A.curves.size());
        cv.genus = c.singular ? c.genus - 1 : c.genus;
        cv.self0 = c.self_intersection;
        cv.mu = c.multiplicity;
        cv.singular = c.singular;
        A.curves.push_back(cv);
    }
    std::set<std::string> seenR;
    for (const auto& id : spec.in_R) {
        int i = F.index_of(id);
        if (i < 0) {
            report("UnknownCurve", "", "in_R names unknown component " + id);
            continue;
        }
        if (!seenR.insert(id).second) report("DuplicateCurve", "", "in_R lists " + id + " twice");
        A.curves[i].in_R = true;
    }

    // Flatten the forest in preorder with path ids.
    std::map<std::string, int> by_id;
    std::function<void(const ForestNode&, int, const std::string&)> flatten =
        [&](const ForestNode& fn, int parent, const std::string& path) {
            int idx = static_cast<int>(A.nodes.size());
            Node nd;
            nd.id = fn.id.empty() ? path : fn.id;
            nd.m = fn.m;
            nd.parent = parent;
            nd.depth = parent < 0 ? 0 : A.nodes[parent].depth + 1;
            A.nodes.push_back(nd);
            if (!by_id.emplace(A.nodes[idx].id, idx).second)
                report("DuplicateNodeId", A.nodes[idx].id, "node id used twice");
            if (parent >= 0) A.nodes[parent].children.push_back(idx);
            else A.roots.push_back(idx);
            Curve e;
            e.name = "E" + A.nodes[idx].id;
            e.node = idx;
            e.self0 = -1;
            A.nodes[idx].ecurve = static_cast<int>(A.curves.size());
            A.curves.push_back(e);
            for (size_t i = 0; i < fn.children.size(); ++i)
                flatten(fn.children[i], idx, path + "." + std::to_string(i));
        };
    for (size_t i = 0; i < spec.forest.size(); ++i) flatten(spec.forest[i], -1, std::to_string(i));

    // Resolve incidence lists.
    {
        std::function<void(const ForestNode&, int&)> resolve = [&](const ForestNode& fn, int& counter) {
            int idx = counter++;
            Node& nd = A.nodes[idx];
            const std::string& id = nd.id;
            try {
                auto mi = classify_multiplicity(nd.m, n);
                nd.cls = mi.cls;
                nd.k = mi.k;
            } catch (const Error&) {
                report("InvalidMultiplicity", id,
                       "m = " + std::to_string(nd.m) + " is not 0 or 1 mod " + std::to_string(n));
            }
            A.curves[nd.ecurve].in_R = nd.cls == MultClass::NZ_PLUS_1 && classifiable(nd.m, n);
            int parentE = nd.parent >= 0 ? A.nodes[nd.parent].ecurve : -1;
            if (parentE >= 0) nd.on.push_back({parentE, 1});
            for (const auto& ref : fn.on) {
                int c = F.index_of(ref.curve);
                if (c < 0) {
                    // exceptional curve of an ancestor
                    if (ref.curve.size() > 1 && ref.curve[0] == 'E') {
                        auto it = by_id.find(ref.curve.substr(1));
                        if (it != by_id.end()) {
                            int anc = nd.parent;
                            while (anc >= 0 && anc != it->second) anc = A.nodes[anc].parent;
                            if (anc >= 0) c = A.nodes[anc].ecurve;
                        }
                    }
                }
                if (c < 0) {
                    report("UnknownCurve", id, "no curve " + ref.curve + " through this point");
                    continue;
                }
                if (c == parentE) {
                    if (ref.mult != 1) report("CurveMultiplicity", id, "parent's exceptional curve is smooth");
                    continue;
                }
                if (nd.mult_of(c) != 0) {
                    report("DuplicateCurve", id, ref.curve + " listed twice");
                    continue;
                }
                if (nd.parent < 0 && A.curves[c].exceptional())
                    report("RootOffFiber", id, "roots lie on the fiber, not on " + ref.curve);
                bool singular_point = ref.mult == 2 && nd.parent < 0 && A.curves[c].singular;
                if (ref.mult != 1 && !singular_point)
                    report("CurveMultiplicity", id, ref.curve + " has multiplicity " + std::to_string(ref.mult));
                nd.on.push_back({c, ref.mult});
            }
            if (nd.parent < 0) {
                bool any = std::any_of(nd.on.begin(), nd.on.end(),
                                       [&](auto p) { return !A.curves[p.first].exceptional(); });
                if (!any) report("RootOffFiber", id, "root lists no fiber component");
            } else {
                const Node& par = A.nodes[nd.parent];
                for (auto [c, mu] : nd.on) {
                    if (c == parentE) continue;
                    if (par.mult_of(c) == 0)
                        report("ChildNotOnParentCurves", id,
                               A.curves[c].name + " does not pass through the parent point");
                }
            }
            for (const auto& ch : fn.children) resolve(ch, counter);
        };
        int counter = 0;
        for (const auto& root : spec.forest) resolve(root, counter);
    }
    if (!V.empty()) return A;
    A.structural_ok = true;

    for (auto& nd : A.nodes) {
        for (auto [c, mu] : nd.on) {
            A.curves[c].points.push_back({static_cast<int>(&nd - A.nodes.data()), mu});
            if (A.curves[c].in_R) {
                nd.vertical += mu;
                ++nd.u;
            }
        }
        nd.h = nd.m - nd.vertical;
        long mu = 0;
        for (auto [c, k] : nd.on) mu += A.curves[c].mu * k;
        A.curves[nd.ecurve].mu = mu;
        if (nd.h < 0)
            report("NegativeHorizontal", nd.id,
                   "m = " + std::to_string(nd.m) + " is below the vertical part " + std::to_string(nd.vertical));
        if (nd.m > rm + 1)
            report("MultiplicityExceedsBound", nd.id,
                   std::to_string(nd.m) + " > r/m_p + 1 = " + std::to_string(rm + 1));
        if (P.h == 0) {
            bool total = n == 2 && P.g % 2 == 0;
            int val = total ? nd.m : nd.h;
            if (2 * val > P.r)
                report("NormalizationBound", nd.id,
                       std::string(total ? "mult(R)" : "mult(R_h)") + " = " + std::to_string(val) +
                           " > r/2 = " + std::to_string(P.r / 2));
        }
    }

    // Roots: location must be a generic point, a singular point, or a point of the dual graph.
    std::map<std::vector<int>, int> root_at;
    for (int ri : A.roots) {
        Node& nd = A.nodes[ri];
        std::vector<int> comps;
        for (auto [c, mu] : nd.on) comps.push_back(c);
        std::sort(comps.begin(), comps.end());
        if (comps.size() == 1) {
            if (nd.on[0].second == 2 && ++root_at[{comps[0], -2}] > 1)
                report("PointOccupancy", nd.id, "two roots at the singular point of " + A.curves[comps[0]].name);
            continue;
        }
        int slots = 0, mult = 0;
        for (const auto& e : F.edges) {
            std::vector<int> ec = e.comps;
            std::sort(ec.begin(), ec.end());
            if (ec == comps) {
                ++slots;
                mult = e.mult;
            }
        }
        if (slots == 0) {
            report("NotAnIntersectionPoint", nd.id, "listed components do not meet in one point");
            continue;
        }
        if (++root_at[comps] > slots) report("PointOccupancy", nd.id, "more roots than intersection points");
        for (size_t a = 0; a < comps.size(); ++a)
            for (size_t b = a + 1; b < comps.size(); ++b) nd.pair_I[{comps[a], comps[b]}] = mult;
    }
    for (size_t c = 0; c < F.components.size(); ++c) {
        if (A.curves[c].in_R && A.curves[c].singular && root_at[{static_cast<int>(c), -2}] == 0)
            report("UnresolvedIntersection", "", "singular point of " + A.curves[c].name + " is not blown up");
    }
    {
        std::map<std::vector<int>, int> need;
        for (const auto& e : F.edges) {
            int inR = 0;
            for (int c : e.comps) inR += A.curves[c].in_R;
            if (inR >= 2) {
                std::vector<int> ec = e.comps;
                std::sort(ec.begin(), ec.end());
                ++need[ec];
            }
        }
        for (const auto& [loc, cnt] : need)
            if (root_at[loc] < cnt)
                report("UnresolvedIntersection", "", "components of R meet at a point that is not blown up");
    }

    // Children: branch capacity, tangency bookkeeping, resolution of R-curve contacts.
    for (size_t xi = 0; xi < A.nodes.size(); ++xi) {
        Node& x = A.nodes[xi];
        const int Ex = x.ecurve;
        std::map<int, int> listed;
        std::map<std::pair<int, int>, int> pair_children;
        for (int yi : x.children) {
            Node& y = A.nodes[yi];
            for (auto [c, mu] : y.on) {
                if (c == Ex) continue;
                ++listed[c];
                int kx = x.mult_of(c);
                bool cusp = kx == 2 && F.cuspidal();
                y.pair_I[ordered(c, Ex)] = cusp ? 2 : 1;
            }
            for (size_t a = 0; a < y.on.size(); ++a)
                for (size_t b = a + 1; b < y.on.size(); ++b) {
                    int ca = y.on[a].first, cb = y.on[b].first;
                    if (ca == Ex || cb == Ex) continue;
                    auto key = ordered(ca, cb);
                    auto it = x.pair_I.find(key);
                    int before = it == x.pair_I.end() ? 0 : it->second;
                    int res = before - x.mult_of(ca) * x.mult_of(cb);
                    if (res <= 0)
                        report("TangencyMismatch", y.id,
                               A.curves[ca].name + " and " + A.curves[cb].name + " do not meet here");
                    y.pair_I[key] = res;
                    ++pair_children[key];
                }
        }
        for (auto [c, cnt] : listed) {
            int kx = x.mult_of(c);
            int cap = (kx == 2 && !F.cuspidal()) ? 2 : 1;
            if (cnt > cap)
                report("BranchOverflow", x.id, A.curves[c].name + " meets the exceptional curve fewer times");
        }
        for (auto [key, cnt] : pair_children)
            if (cnt > 1) report("TangencyMismatch", x.id, "a tangency continues at two points");
        for (auto [key, I] : x.pair_I) {
            int res = I - x.mult_of(key.first) * x.mult_of(key.second);
            if (res < 0) report("TangencyMismatch", x.id, "negative residual intersection");
            if (res <= 0) continue;
            // Tangent curves leave through the same point of E_x.
            bool carried = pair_children.count(key) > 0;
            for (int yi : x.children) {
                const Node& y = A.nodes[yi];
                bool ha = y.mult_of(key.first) > 0, hb = y.mult_of(key.second) > 0;
                if (ha != hb)
                    report("IncompleteCurveList", y.id,
                           A.curves[key.first].name + " and " + A.curves[key.second].name +
                               " are tangent at the parent point");
            }
            if (!carried && A.curves[key.first].in_R && A.curves[key.second].in_R)
                report("UnresolvedIntersection", x.id,
                       A.curves[key.first].name + " and " + A.curves[key.second].name + " still meet");
        }
        if (A.curves[Ex].in_R) {
            for (auto [c, kx] : x.on) {
                if (!A.curves[c].in_R) continue;
                int met = 0;
                for (int yi : x.children) {
                    const Node& y = A.nodes[yi];
                    auto it = y.pair_I.find(ordered(c, Ex));
                    if (y.mult_of(c) > 0 && it != y.pair_I.end()) met += it->second;
                }
                if (met != kx)
                    report("UnresolvedIntersection", x.id,
                           A.curves[c].name + " meets " + A.curves[Ex].name + " outside the forest");
            }
        }
    }

    // Vertical types.
    int three = 0;
    bool all_in_R = std::all_of(A.curves.begin(), A.curves.begin() + F.components.size(),
                                [](const Curve& c) { return c.in_R; });
    for (const auto& nd : A.nodes) {
        if (nd.u >= 4) report("VerticalType", nd.id, std::to_string(nd.u) + " curves of R through one point");
        if (nd.u == 3) {
            ++three;
            bool ok = (F.kind == FiberKind::II || F.kind == FiberKind::III || F.kind == FiberKind::IV) && all_in_R;
            if (!ok) report("VerticalType", nd.id, "three curves of R meet outside the allowed configurations");
        }
    }
    if (three > 1) report("VerticalType", "", "more than one point with three curves of R");
    if (P.h == 1) {
        for (const auto& nd : A.nodes) {
            if (nd.cls != MultClass::NZ_PLUS_1) continue;
            if (n >= 3 && nd.m == rm + 1)
                report("TopMultiplicity", nd.id, "no point of multiplicity r/m_p + 1 in nZ+1 for n >= 3");
            if (n == 2 && 2L * nd.k == rm && nd.u >= 2)
                report("TopMultiplicity", nd.id, "no vertical point of multiplicity r/m_p + 1 for n = 2");
        }
    }

    // Horizontal degrees.
    const size_t NC = A.curves.size();
    A.lb.assign(NC, 0);
    A.rh.assign(NC, 0);
    A.residual.assign(NC, 0);
    for (const auto& nd : A.nodes)
        for (auto [c, k] : nd.on) A.lb[c] += static_cast<long>(nd.h) * k;
    for (const auto& nd : A.nodes) {
        int E = nd.ecurve;
        A.rh[E] = nd.h;
        A.residual[E] = nd.h - A.lb[E];
        if (A.curves[E].in_R && A.residual[E] != 0)
            report("HorizontalUnresolved", nd.id, "horizontal branches meet " + A.curves[E].name + " outside the forest");
        if (A.residual[E] < 0) report("HorizontalOverflow", nd.id, "more horizontal multiplicity on the exceptional curve than available");
    }
    long target = rm;
    std::vector<int> free_comps;
    std::vector<long> lower, vpart;
    for (size_t c = 0; c < F.components.size(); ++c) {
        long v = 0;
        for (size_t i = 0; i < F.components.size(); ++i)
            if (A.curves[i].in_R) v += component_intersection(F, static_cast<int>(i), static_cast<int>(c));
        if (A.curves[c].in_R) {
            A.rh[c] = A.lb[c];
            target -= F.components[c].multiplicity * A.lb[c];
        } else {
            free_comps.push_back(static_cast<int>(c));
            lower.push_back(A.lb[c]);
            vpart.push_back(v);
        }
    }
    long forced = 0;
    auto dist = distribute_degree(F, n, target, free_comps, lower, vpart);
    if (!dist) {
        report("HorizontalDegree", "", "no distribution of R_h over the fiber with total degree r/m_p");
    } else {
        for (size_t j = 0; j < free_comps.size(); ++j) {
            A.rh[free_comps[j]] = dist->first[j];
            A.residual[free_comps[j]] = dist->first[j] - lower[j];
        }
        forced += dist->second;
    }
    for (const auto& nd : A.nodes) {
        int E = nd.ecurve;
        if (A.residual[E] > 0) forced += (F.m_p * A.curves[E].mu - 1) * A.residual[E];
    }
    A.forced_alpha0_plus = forced;
    long esum = 0;
    for (int e : spec.horizontal.branches) {
        if (e < 1) report("HorizontalData", "", "ramification index must be >= 1");
        esum += e;
    }
    if (esum > P.r) report("HorizontalData", "", "ramification indices sum beyond r");
    if (declared_alpha0_plus(spec.horizontal) < 0) report("HorizontalData", "", "alpha0_plus must be >= 0");

    // Curve ledger: self-intersections and the contact count of each curve of R.
    A.RC.assign(NC, 0);
    A.L2.assign(NC, 0);
    for (size_t c = 0; c < NC; ++c) {
        const Curve& cv = A.curves[c];
        long L2 = cv.self0, kd = 0;
        for (auto [z, k] : cv.points) {
            L2 -= static_cast<long>(k) * k;
            kd += static_cast<long>(k) * (A.nodes[z].m / n);
        }
        A.L2[c] = L2;
        if (!cv.in_R) continue;
        long RC;
        if (cv.exceptional()) {
            RC = static_cast<long>(n) * (A.nodes[cv.node].m / n);
        } else {
            RC = A.lb[c];
            for (size_t i = 0; i < F.components.size(); ++i)
                if (A.curves[i].in_R) RC += component_intersection(F, static_cast<int>(i), static_cast<int>(c));
        }
        A.RC[c] = RC;
        if (L2 >= 0 || L2 % n != 0)
            report("SelfIntersection", "", cv.name + " ends with self-intersection " + std::to_string(L2) +
                                               ", not a negative multiple of n");
        if (RC != L2 + n * kd)
            report("CurveLedger", "", cv.name + ": R.C = " + std::to_string(RC) + " but L^2 + n*sum k d = " +
                                          std::to_string(L2 + n * kd));
    }
    A.complete = true;
    return A;
}

}  // namespace detail

inline ValidationReport validate_germ(const GermSpec& spec) { return detail::analyze(spec).violations; }

inline long forced_alpha0_plus(const GermSpec& spec) {
    auto A = detail::analyze(spec);
    if (!A.complete) throw Error(ErrorCode::InconsistentForest, "germ does not validate");
    return A.forced_alpha0_plus;
}

// ---- canonical form ----

namespace detail {

struct CanonNode {
    int m = 0;
    std::vector<std::pair<std::string, int>> on;  // "C:<id>" or "A<d>" (ancestor at distance d)
    std::vector<CanonNode> children;
    std::string key;
    int size = 1;
};

inline void canon_sort(std::vector<CanonNode>& v) {
    std::sort(v.begin(), v.end(), [](const CanonNode& a, const CanonNode& b) {
        if (a.m != b.m) return a.m > b.m;
        if (a.size != b.size) return a.size > b.size;
        return a.key < b.key;
    });
}

inline CanonNode canon_build(const ForestNode& fn, std::vector<std::string>& ancestors, const FiberDescriptor& F) {
    CanonNode cn;
    cn.m = fn.m;
    std::string parent_E = ancestors.empty() ? "" : "E" + ancestors.back();
    for (const auto& ref : fn.on) {
        if (F.index_of(ref.curve) >= 0) {
            cn.on.push_back({"C:" + ref.curve, ref.mult});
            continue;
        }
        if (ref.curve == parent_E) continue;
        int d = 0;
        for (size_t i = ancestors.size(); i-- > 0;) {
            ++d;
            if ("E" + ancestors[i] == ref.curve) break;
            if (i == 0) d = -1;
        }
        cn.on.push_back({d > 0 ? "A" + std::to_string(d) : "?" + ref.curve, ref.mult});
    }
    std::sort(cn.on.begin(), cn.on.end());
    for (size_t i = 0; i < fn.children.size(); ++i) {
        ancestors.push_back(fn.id.empty() ? std::string("#") : fn.id);
        cn.children.push_back(canon_build(fn.children[i], ancestors, F));
        ancestors.pop_back();
    }
    canon_sort(cn.children);
    cn.key = "(" + std::to_string(cn.m) + "[";
    for (const auto& [c, mu] : cn.on) cn.key += c + "^" + std::to_string(mu) + ",";
    cn.key += "]";
    for (const auto& ch : cn.children) {
        cn.key += ch.key;
        cn.size += ch.size;
    }
    cn.key += ")";
    return cn;
}

inline ForestNode canon_emit(const CanonNode& cn, const std::string& path, std::vector<std::string>& ancestors) {
    ForestNode fn;
    fn.id = path;
    fn.m = cn.m;
    for (const auto& [c, mu] : cn.on) {
        if (c.rfind("C:", 0) == 0) fn.on.push_back({c.substr(2), mu});
        else if (c[0] == 'A') {
            int d = std::stoi(c.substr(1));
            fn.on.push_back({"E" + ancestors[ancestors.size() - d], mu});
        } else {
            fn.on.push_back({c.substr(1), mu});
        }
    }
    ancestors.push_back(path);
    for (size_t i = 0; i < cn.children.size(); ++i)
        fn.children.push_back(canon_emit(cn.children[i], path + "." + std::to_string(i), ancestors));
    ancestors.pop_back();
    return fn;
}

// Path ids, so that exceptional-curve references resolve during canonical building.
inline void assign_path_ids(std::vector<ForestNode>& roots) {
    std::function<void(ForestNode&, const std::string&)> go = [&](ForestNode& fn, const std::string& path) {
        std::string old = fn.id.empty() ? path : fn.id;
        fn.id = old;
        for (size_t i = 0; i < fn.children.size(); ++i) go(fn.children[i], path + "." + std::to_string(i));
    };
    for (size_t i = 0; i < roots.size(); ++i) go(roots[i], std::to_string(i));
}

}  // namespace detail

inline std::string canonical_key(const GermSpec& spec) {
    std::vector<ForestNode> roots = spec.forest;
    detail::assign_path_ids(roots);
    std::vector<detail::CanonNode> cr;
    std::vector<std::string> anc;
    for (const auto& r : roots) cr.push_back(detail::canon_build(r, anc, spec.fiber));
    detail::canon_sort(cr);
    std::vector<int> inR;
    for (const auto& id : spec.in_R) inR.push_back(spec.fiber.index_of(id));
    std::sort(inR.begin(), inR.end());
    std::string key = kind_name(spec.fiber) + "/" + std::to_string(spec.fiber.m_p) + "|R";
    for (int i : inR) key += ":" + std::to_string(i);
    key += "|";
    for (const auto& c : cr) key += c.key;
    std::vector<int> br = spec.horizontal.branches;
    std::sort(br.rbegin(), br.rend());
    key += "|h";
    for (int e : br) key += ":" + std::to_string(e);
    if (spec.horizontal.alpha0_plus) key += "|a" + std::to_string(*spec.horizontal.alpha0_plus);
    return key;
}

inline GermSpec canonical_form(const GermSpec& spec) {
    GermSpec out = spec;
    std::vector<ForestNode> roots = spec.forest;
    detail::assign_path_ids(roots);
    std::vector<detail::CanonNode> cr;
    std::vector<std::string> anc;
    for (const auto& r : roots) cr.push_back(detail::canon_build(r, anc, spec.fiber));
    detail::canon_sort(cr);
    out.forest.clear();
    for (size_t i = 0; i < cr.size(); ++i) out.forest.push_back(detail::canon_emit(cr[i], std::to_string(i), anc));
    std::sort(out.in_R.begin(), out.in_R.end(), [&](const std::string& a, const std::string& b) {
        return spec.fiber.index_of(a) < spec.fiber.index_of(b);
    });
    std::sort(out.horizontal.branches.rbegin(), out.horizontal.branches.rend());
    return out;
}

}  // namespace fibcalc
