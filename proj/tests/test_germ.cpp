#include "fibcalc/germ.hpp"
#include "support/germs.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

using namespace fibcalc;
using namespace testgerms;

namespace {

std::set<std::string> rules(const ValidationReport& v) {
    std::set<std::string> out;
    for (const auto& x : v) out.insert(x.rule);
    return out;
}

bool has(const ValidationReport& v, const std::string& rule) { return rules(v).count(rule) > 0; }

// n = 3, g = 7: all of IV in R, a 3-point at the triple point, three 3-points on C0.
GermSpec iv_triple_point() {
    GermSpec s = base(7, 1, 3, FiberKind::IV);
    s.in_R = {"C0", "C1", "C2"};
    s.forest = {node(3, {{"C0", 1}, {"C1", 1}, {"C2", 1}}), node(3, {{"C0", 1}}), node(3, {{"C0", 1}}),
                node(3, {{"C0", 1}})};
    s.horizontal.alpha0_plus = 0;
    return s;
}

}  // namespace

TEST(Germ, GeneralFiberIsValid) {
    EXPECT_TRUE(validate_germ(base(4, 1, 3)).empty());
    EXPECT_TRUE(validate_germ(base(3, 0, 2)).empty());
    EXPECT_TRUE(validate_germ(base(3, 1, 2, FiberKind::IStar, 1)).empty());
}

TEST(Germ, WorkedGermsAreValid) {
    for (const GermSpec& s : {chain_r(4, 3, 1), chain_r(13, 4, 2), odd_chain(3, 1), odd_chain(5, 2), n3_config(7),
                              n3_config(10), triple_403()})
        EXPECT_TRUE(validate_germ(s).empty()) << s.params.g << " " << s.params.n;
}

TEST(Germ, ThreeVerticalPointOnIV) {
    GermSpec s = iv_triple_point();
    auto A = detail::analyze(s);
    EXPECT_TRUE(A.violations.empty());
    int u3 = 0;
    for (const auto& nd : A.nodes) u3 += nd.u == 3;
    EXPECT_EQ(u3, 1);
}

TEST(Germ, InvalidMultiplicity) {
    GermSpec s = base(4, 1, 3);
    s.forest = {node(5, {{"C0", 1}})};
    EXPECT_TRUE(has(validate_germ(s), "InvalidMultiplicity"));
}

TEST(Germ, MultiplicityBoundForGenusZeroBase) {
    GermSpec s = base(4, 0, 2);
    ASSERT_EQ(s.params.r, 10);
    s.forest = {node(12, {{"C0", 1}})};
    auto v = validate_germ(s);
    EXPECT_TRUE(has(v, "MultiplicityExceedsBound"));
    EXPECT_TRUE(has(v, "NormalizationBound"));
}

TEST(Germ, MultipleFibersOnlyForSmoothAndIk) {
    GermSpec s = base(3, 1, 2, FiberKind::IStar, 0, 2);
    EXPECT_FALSE(validate_germ(s).empty());
    GermSpec t = base(3, 1, 2, FiberKind::I, 1, 2);
    EXPECT_TRUE(validate_germ(t).empty());
}

TEST(Germ, UnknownCurve) {
    GermSpec s = base(4, 1, 3);
    s.forest = {node(3, {{"C7", 1}})};
    EXPECT_TRUE(has(validate_germ(s), "UnknownCurve"));
}

TEST(Germ, RuledLineOnlyOverRationalBase) {
    GermSpec s = base(3, 1, 2);
    s.fiber = standard_fiber(FiberKind::RuledLine);
    EXPECT_TRUE(has(validate_germ(s), "FiberDescriptor"));
}

TEST(Germ, AlphaZeroPlusDefaultsToBranchRamification) {
    HorizontalData h;
    h.branches = {1, 2, 3};
    EXPECT_EQ(declared_alpha0_plus(h), 3);
    h.alpha0_plus = 7;
    EXPECT_EQ(declared_alpha0_plus(h), 7);
}

TEST(Canonical, RootOrderDoesNotMatter) {
    GermSpec a = iv_triple_point();
    GermSpec b = a;
    std::reverse(b.forest.begin(), b.forest.end());
    EXPECT_EQ(canonical_key(a), canonical_key(b));
    EXPECT_EQ(canonical_form(a), canonical_form(b));
}

TEST(Canonical, ChildOrderDoesNotMatter) {
    GermSpec a = n3_config(7);
    GermSpec b = a;
    auto& kids = b.forest[0].children[0].children;
    std::swap(kids[0], kids[1]);
    EXPECT_EQ(canonical_key(a), canonical_key(b));
}

TEST(Canonical, Idempotent) {
    for (const GermSpec& s : {iv_triple_point(), n3_config(10), triple_403(), odd_chain(5, 2)}) {
        GermSpec c = canonical_form(s);
        EXPECT_EQ(canonical_form(c), c);
        EXPECT_EQ(canonical_key(c), canonical_key(s));
    }
}

TEST(Canonical, SingleNodeIsItself) {
    GermSpec s = chain_r(4, 3, 1);
    GermSpec c = canonical_form(s);
    ASSERT_EQ(c.forest.size(), 1u);
    EXPECT_EQ(c.forest[0].m, 3);
    EXPECT_EQ(c.forest[0].on, s.forest[0].on);
}

TEST(Canonical, ValidationIsLabelInvariant) {
    GermSpec bad = base(4, 1, 3);
    bad.forest = {node(5, {{"C0", 1}}), node(3, {{"C0", 1}})};
    for (const GermSpec& s : {iv_triple_point(), n3_config(7), triple_403(), bad})
        EXPECT_EQ(rules(validate_germ(canonical_form(s))), rules(validate_germ(s)));
}

TEST(Canonical, DistinguishesDifferentGerms) {
    EXPECT_NE(canonical_key(odd_chain(5, 1)), canonical_key(odd_chain(5, 2)));
    GermSpec a = triple_403();
    GermSpec b = a;
    b.in_R.clear();
    EXPECT_NE(canonical_key(a), canonical_key(b));
}
