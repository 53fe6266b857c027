#pragma once
// Hand-built germs shared by the test suites.

#include "fibcalc/germ.hpp"

namespace testgerms {

using namespace fibcalc;

inline ForestNode node(int m, std::vector<CurveRef> on = {}, std::vector<ForestNode> children = {}) {
    ForestNode n;
    n.m = m;
    n.on = std::move(on);
    n.children = std::move(children);
    return n;
}

inline GermSpec base(int g, int h, int n, FiberKind kind = FiberKind::Smooth, int k = 0, int m_p = 1) {
    GermSpec s;
    s.params = compute_params(g, h, n);
    s.fiber = standard_fiber(h == 0 ? FiberKind::RuledLine : kind, k, m_p);
    return s;
}

// Smooth elliptic fiber, chain of l points of multiplicity r riding the horizontal branches.
inline GermSpec chain_r(int g, int n, int l) {
    GermSpec s = base(g, 1, n);
    int r = s.params.r;
    ForestNode top = node(r);
    for (int i = 1; i < l; ++i) top = node(r, {}, {top});
    top.on = {{"C0", 1}};
    s.forest = {top};
    s.horizontal.branches.assign(r, 1);
    return s;
}

// n = 2: alternating chain x_1 (r-1) on the fiber, x_2 (r) on E_1, x_3 (r-1) on E_2, ...
inline GermSpec odd_chain(int g, int l) {
    GermSpec s = base(g, 1, 2);
    int r = s.params.r;
    ForestNode top = node(r - 1, {}, {node(r)});
    for (int i = 1; i < l; ++i) top = node(r - 1, {}, {node(r, {}, {top})});
    top.on = {{"C0", 1}};
    s.forest = {top};
    s.horizontal.branches.assign(r, 1);
    return s;
}

// n = 3, g > 4: x (r-2) on the fiber; y (r-2) on E_x; z (r-3) and w (3) on E_y, w also on E_x.
inline GermSpec n3_config(int g) {
    GermSpec s = base(g, 1, 3);
    int r = s.params.r;
    ForestNode w = node(3, {{"E0", 1}});
    ForestNode z = node(r - 3);
    ForestNode y = node(r - 2, {}, {z, w});
    s.forest = {node(r - 2, {{"C0", 1}}, {y})};
    s.horizontal.alpha0_plus = 1;
    return s;
}

// (g,h,n) = (4,0,3): fiber line in R, x (4) -> x' (4, on the line) -> 3 on the line and 3 on E_x.
inline GermSpec triple_403() {
    GermSpec s = base(4, 0, 3);
    s.in_R = {"C0"};
    ForestNode y1 = node(3, {{"C0", 1}});
    ForestNode y2 = node(3, {{"E0", 1}});
    ForestNode x2 = node(4, {{"C0", 1}}, {y1, y2});
    s.forest = {node(4, {{"C0", 1}}, {x2})};
    s.horizontal.alpha0_plus = 4;
    return s;
}

}  // namespace testgerms
