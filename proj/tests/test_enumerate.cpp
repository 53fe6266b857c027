#include "fibcalc/bounds.hpp"
#include "fibcalc/enumerate.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace fibcalc;

namespace {

std::vector<FiberDescriptor> small_fibers(const FibrationParams& p) {
    if (p.h == 0) return {standard_fiber(FiberKind::RuledLine)};
    return {standard_fiber(FiberKind::Smooth), standard_fiber(FiberKind::I, 1), standard_fiber(FiberKind::I, 2),
            standard_fiber(FiberKind::III), standard_fiber(FiberKind::IV)};
}

GermCaps caps(int nodes, int mult = 0, bool prune = true) {
    GermCaps c;
    c.max_nodes = nodes;
    c.max_mult = mult;
    c.prune = prune;
    return c;
}

}  // namespace

TEST(Enumerate, SmoothFiberSingleNode) {
    FibrationParams p = compute_params(3, 1, 2);
    auto gs = enumerate_germs(p, {standard_fiber(FiberKind::Smooth)}, caps(1, 5));
    ASSERT_EQ(gs.size(), 3u);
    std::multiset<int> mults;
    for (const auto& g : gs) {
        EXPECT_TRUE(g.in_R.empty());
        for (const auto& x : g.forest) mults.insert(x.m);
    }
    EXPECT_EQ(mults, (std::multiset<int>{2, 4}));
}

TEST(Enumerate, ZeroNodesGivesBareFibers) {
    FibrationParams p = compute_params(3, 1, 2);
    auto gs = enumerate_germs(p, caps(0));
    ASSERT_FALSE(gs.empty());
    std::set<FiberKind> kinds;
    for (const auto& g : gs) {
        EXPECT_TRUE(g.forest.empty());
        EXPECT_TRUE(validate_germ(g).empty());
        kinds.insert(g.fiber.kind);
    }
    EXPECT_TRUE(kinds.count(FiberKind::Smooth));
}

TEST(Enumerate, OutputIsValidCanonicalAndSorted) {
    for (auto [g, h, n] : std::vector<std::tuple<int, int, int>>{{3, 1, 2}, {4, 1, 3}, {3, 0, 2}, {4, 0, 3}}) {
        FibrationParams p = compute_params(g, h, n);
        auto gs = enumerate_germs(p, caps(2));
        std::string prev;
        for (const auto& s : gs) {
            EXPECT_TRUE(validate_germ(s).empty());
            EXPECT_EQ(s, canonical_form(s));
            std::string key = canonical_key(s);
            EXPECT_LT(prev, key);
            prev = key;
            EXPECT_EQ(s.horizontal.alpha0_plus, derive_indices(s).alpha0_plus);
        }
    }
}

TEST(Enumerate, Deterministic) {
    FibrationParams p = compute_params(7, 1, 3);
    EXPECT_EQ(enumerate_germs(p, caps(2)), enumerate_germs(p, caps(2)));
}

TEST(Enumerate, PruningLosesNothing) {
    for (auto [g, h, n, nodes] :
         std::vector<std::tuple<int, int, int, int>>{{3, 1, 2, 3}, {4, 1, 3, 2}, {7, 1, 3, 2}, {3, 0, 2, 2}, {4, 0, 3, 2}}) {
        FibrationParams p = compute_params(g, h, n);
        auto fs = small_fibers(p);
        EXPECT_EQ(enumerate_germs(p, fs, caps(nodes)), enumerate_germs(p, fs, caps(nodes, 0, false)))
            << g << "," << h << "," << n;
    }
    FibrationParams p = compute_params(3, 1, 2);
    EXPECT_EQ(enumerate_germs(p, caps(1)), enumerate_germs(p, caps(1, 0, false)));
}

TEST(Enumerate, MoreNodesOnlyAdds) {
    FibrationParams p = compute_params(4, 1, 3);
    auto a = enumerate_germs(p, caps(1));
    auto b = enumerate_germs(p, caps(2));
    std::set<std::string> keys;
    for (const auto& s : b) keys.insert(canonical_key(s));
    for (const auto& s : a) EXPECT_TRUE(keys.count(canonical_key(s)));
    EXPECT_GT(b.size(), a.size());
}

TEST(Enumerate, AuditsHoldOnEnumeration) {
    FibrationParams p = compute_params(3, 1, 2);
    for (const auto& s : enumerate_germs(p, caps(3))) {
        IndexRecord I = derive_indices(s);
        EXPECT_GE(bound_audit(I, s.fiber, s.params), 0);
        LemmaAuditReport rep = audit_lemmas(I, s.fiber, s.params);
        EXPECT_TRUE(rep.all_pass()) << canonical_key(s);
    }
}

TEST(Enumerate, CapGuard) {
    setenv("FIBCALC_MAX_ENUM", "10", 1);
    try {
        enumerate_germs(compute_params(3, 1, 2), caps(2));
        ADD_FAILURE() << "no cap error";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::CapTooLarge);
    }
    unsetenv("FIBCALC_MAX_ENUM");
    EXPECT_THROW(enumerate_germs(compute_params(3, 1, 2), caps(-1)), Error);
}
