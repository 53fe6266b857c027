#pragma once

#include "core.hpp"
#include "diagrams.hpp"
#include "fiber.hpp"
#include "germ.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace fibcalc {

struct GermCaps {
    int max_nodes = 3;
    int max_mult = 0;  // 0: r/m_p + 1
    bool prune = true;  // false expands every state, for cross-checking the pruning
};

// Fiber kinds of the enumeration: the Kodaira list (I_k for k <= max_k, I*_k for k <= 1),
// with the multiple fibers m I_0 and m I_1 allowed by r; a single line for h = 0.
inline std::vector<FiberDescriptor> default_fibers(const FibrationParams& p, int max_k = 3) {
    std::vector<FiberDescriptor> out;
    if (p.h == 0) {
        out.push_back(standard_fiber(FiberKind::RuledLine));
        return out;
    }
    out.push_back(standard_fiber(FiberKind::Smooth));
    for (int k = 1; k <= max_k; ++k) out.push_back(standard_fiber(FiberKind::I, k));
    for (auto k : {FiberKind::II, FiberKind::III, FiberKind::IV}) out.push_back(standard_fiber(k));
    out.push_back(standard_fiber(FiberKind::IStar, 0));
    out.push_back(standard_fiber(FiberKind::IStar, 1));
    for (auto k : {FiberKind::IIStar, FiberKind::IIIStar, FiberKind::IVStar}) out.push_back(standard_fiber(k));
    for (int m = 2; m <= p.r; ++m) {
        if (p.r % m != 0 || (p.r / m) % p.n != 0) continue;
        out.push_back(standard_fiber(FiberKind::Smooth, 0, m));
        out.push_back(standard_fiber(FiberKind::I, 1, m));
    }
    return out;
}

namespace detail {

// Violations that no further blowup can remove.
inline bool permanent(const std::string& rule) {
    static const std::set<std::string> rules = {
        "FiberDescriptor",   "MultipleFiberDegree", "UnknownCurve",       "DuplicateCurve",
        "DuplicateNodeId",   "InvalidMultiplicity", "CurveMultiplicity",  "RootOffFiber",
        "ChildNotOnParentCurves", "NegativeHorizontal", "MultiplicityExceedsBound", "NormalizationBound",
        "NotAnIntersectionPoint", "PointOccupancy", "BranchOverflow",     "TangencyMismatch",
        "IncompleteCurveList", "VerticalType",      "TopMultiplicity",    "HorizontalOverflow",
        "HorizontalData"};
    return rules.count(rule) > 0;
}

inline ForestNode* node_at(std::vector<ForestNode>& roots, const std::string& path) {
    size_t pos = path.find('.');
    int i = std::stoi(path.substr(0, pos));
    ForestNode* cur = &roots[i];
    while (pos != std::string::npos) {
        size_t next = path.find('.', pos + 1);
        int c = std::stoi(path.substr(pos + 1, next == std::string::npos ? std::string::npos : next - pos - 1));
        cur = &cur->children[c];
        pos = next;
    }
    return cur;
}

inline void collect_paths(const ForestNode& fn, std::vector<std::pair<std::string, const ForestNode*>>& out,
                          const std::string& parent) {
    out.push_back({parent, &fn});
    for (const auto& c : fn.children) collect_paths(c, out, fn.id);
}

}  // namespace detail

// Every valid germ over the given fibers up to canonical equivalence, with alpha0_plus set to
// the forced minimum, sorted by canonical key.
inline std::vector<GermSpec> enumerate_germs(const FibrationParams& p, const std::vector<FiberDescriptor>& fibers,
                                             const GermCaps& caps) {
    if (caps.max_nodes < 0) throw Error(ErrorCode::InvalidArgument, "max_nodes < 0");
    const long limit = enumeration_limit();
    long visited_total = 0;
    std::map<std::string, GermSpec> found;

    for (const FiberDescriptor& F : fibers) {
        const int nc = static_cast<int>(F.components.size());
        const int top = p.r / F.m_p + 1;
        const int mmax = caps.max_mult > 0 ? std::min(caps.max_mult, top) : top;
        std::vector<int> mults;
        for (int m = 2; m <= mmax; ++m)
            if (classifiable(m, p.n)) mults.push_back(m);

        for (int mask = 0; mask < (1 << nc); ++mask) {
            GermSpec seed;
            seed.params = p;
            seed.fiber = F;
            for (int c = 0; c < nc; ++c)
                if (mask & (1 << c)) seed.in_R.push_back(F.components[c].id);
            // points that must be blown up
            int required = 0;
            for (const auto& e : F.edges) {
                int inR = 0;
                for (int c : e.comps) inR += (mask >> c) & 1;
                if (inR >= 2) ++required;
            }
            for (int c = 0; c < nc; ++c)
                if (((mask >> c) & 1) && F.components[c].singular) ++required;
            if (caps.prune && required > caps.max_nodes) continue;
            std::vector<long> vpart(nc, 0);
            for (int c = 0; c < nc; ++c)
                for (int i = 0; i < nc; ++i)
                    if ((mask >> i) & 1) vpart[c] += component_intersection(F, i, c);
            for (int c = 0; c < nc; ++c) vpart[c] = ((vpart[c] % p.n) + p.n) % p.n;

            // root locations: generic points, intersection points, singular points
            std::vector<std::vector<CurveRef>> roots;
            for (int c = 0; c < nc; ++c) {
                roots.push_back({{F.components[c].id, 1}});
                if (F.components[c].singular) roots.push_back({{F.components[c].id, 2}});
            }
            {
                std::set<std::vector<int>> seen_edge;
                for (const auto& e : F.edges) {
                    std::vector<int> ec = e.comps;
                    std::sort(ec.begin(), ec.end());
                    if (!seen_edge.insert(ec).second) continue;
                    std::vector<CurveRef> on;
                    for (int c : ec) on.push_back({F.components[c].id, 1});
                    roots.push_back(on);
                }
            }

            struct State {
                GermSpec g;
                std::vector<long> lbc;                           // horizontal load on fiber components
                std::map<std::string, std::pair<long, long>> ecap;  // exceptional curve: (h, load)
                std::set<std::string> eR;                        // exceptional curves in R
            };
            const long rm = p.r / F.m_p;
            auto degree_used = [&](const std::vector<long>& lbc) {
                long used = 0;
                for (int c = 0; c < nc; ++c) {
                    long x = lbc[c];
                    if (!((mask >> c) & 1))
                        while ((x + vpart[c]) % p.n != 0) ++x;
                    used += static_cast<long>(F.components[c].multiplicity) * x;
                }
                return used;
            };
            // cheap necessary test for a new point, before any canonical work
            auto admissible = [&](const State& st, const std::vector<CurveRef>& on, const std::string& parentE, int m) {
                if (!caps.prune) return true;
                int vert = 0;
                for (const auto& ref : on) {
                    int c = F.index_of(ref.curve);
                    if (c >= 0 ? ((mask >> c) & 1) : st.eR.count(ref.curve) > 0) vert += ref.mult;
                }
                if (!parentE.empty() && st.eR.count(parentE)) vert += 1;
                long h = m - vert;
                if (h < 0) return false;
                if (p.h == 0) {
                    long val = (p.n == 2 && p.g % 2 == 0) ? m : h;
                    if (2 * val > p.r) return false;
                }
                std::vector<long> lbc = st.lbc;
                auto load_e = [&](const std::string& e, long add) {
                    auto it = st.ecap.find(e);
                    return it == st.ecap.end() || it->second.second + add <= it->second.first;
                };
                for (const auto& ref : on) {
                    int c = F.index_of(ref.curve);
                    if (c >= 0) lbc[c] += h * ref.mult;
                    else if (!load_e(ref.curve, h * ref.mult)) return false;
                }
                if (!parentE.empty() && !load_e(parentE, h)) return false;
                return degree_used(lbc) <= rm;
            };

            std::set<std::string> seen;
            std::vector<State> stack;
            auto visit = [&](GermSpec g) {
                g = canonical_form(g);
                std::string key = canonical_key(g);
                if (!seen.insert(key).second) return;
                if (++visited_total > limit)
                    throw Error(ErrorCode::CapTooLarge, "germ enumeration passed FIBCALC_MAX_ENUM = " +
                                                            std::to_string(limit));
                detail::Analysis A = detail::analyze(g);
                const int count = static_cast<int>(A.nodes.size());
                if (!caps.prune) {
                    if (A.violations.empty() && A.complete) {
                        GermSpec out = g;
                        out.horizontal.alpha0_plus = A.forced_alpha0_plus;
                        out.label.clear();
                        found.emplace(canonical_key(out), out);
                    }
                    if (count >= caps.max_nodes) return;
                    State st;
                    st.g = std::move(g);
                    stack.push_back(std::move(st));
                    return;
                }
                for (const auto& v : A.violations)
                    if (detail::permanent(v.rule)) return;
                if (!A.structural_ok || A.lb.empty()) return;
                std::vector<long> lbc(A.lb.begin(), A.lb.begin() + nc);
                // the fiber's horizontal degree only grows with more points
                if (degree_used(lbc) > rm) return;
                // each point still to be blown up needs its own node
                std::set<std::string> needs;
                int germ_level = 0;
                for (const auto& v : A.violations) {
                    if (v.rule != "UnresolvedIntersection" && v.rule != "HorizontalUnresolved") continue;
                    if (v.node.empty()) ++germ_level;
                    else needs.insert(v.node);
                }
                if (count + static_cast<int>(needs.size()) + germ_level > caps.max_nodes) return;
                if (A.violations.empty() && A.complete) {
                    GermSpec out = g;
                    out.horizontal.alpha0_plus = A.forced_alpha0_plus;
                    out.label.clear();
                    found.emplace(canonical_key(out), out);
                }
                if (count >= caps.max_nodes) return;
                State st;
                st.lbc = std::move(lbc);
                for (const auto& nd : A.nodes) {
                    const auto& E = A.curves[nd.ecurve];
                    st.ecap[E.name] = {nd.h, A.lb[nd.ecurve]};
                    if (E.in_R) st.eR.insert(E.name);
                }
                st.g = std::move(g);
                stack.push_back(std::move(st));
            };
            visit(seed);
            while (!stack.empty()) {
                State st = std::move(stack.back());
                stack.pop_back();
                const GermSpec& g = st.g;
                for (const auto& loc : roots)
                    for (int m : mults) {
                        if (!admissible(st, loc, "", m)) continue;
                        GermSpec h = g;
                        ForestNode x;
                        x.m = m;
                        x.on = loc;
                        h.forest.push_back(x);
                        visit(h);
                    }
                std::vector<std::pair<std::string, const ForestNode*>> nodes;
                for (const auto& r : g.forest) detail::collect_paths(r, nodes, "");
                for (const auto& [parent, xp] : nodes) {
                    std::vector<std::string> through;
                    for (const auto& ref : xp->on) through.push_back(ref.curve);
                    if (!parent.empty()) through.push_back("E" + parent);
                    std::vector<std::vector<CurveRef>> options = {{}};
                    for (size_t a = 0; a < through.size(); ++a) {
                        options.push_back({{through[a], 1}});
                        for (size_t b = a + 1; b < through.size(); ++b)
                            options.push_back({{through[a], 1}, {through[b], 1}});
                    }
                    const std::string path = xp->id;
                    for (const auto& on : options)
                        for (int m : mults) {
                            if (!admissible(st, on, "E" + path, m)) continue;
                            GermSpec h = g;
                            ForestNode y;
                            y.m = m;
                            y.on = on;
                            detail::node_at(h.forest, path)->children.push_back(y);
                            visit(h);
                        }
                }
            }
        }
    }
    std::vector<GermSpec> out;
    out.reserve(found.size());
    for (auto& [k, g] : found) out.push_back(std::move(g));
    return out;
}

inline std::vector<GermSpec> enumerate_germs(const FibrationParams& p, const GermCaps& caps) {
    return enumerate_germs(p, default_fibers(p), caps);
}

}  // namespace fibcalc
