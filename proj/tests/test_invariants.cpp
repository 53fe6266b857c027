#include "fibcalc/invariants.hpp"
#include "support/germs.hpp"

#include <gtest/gtest.h>

using namespace fibcalc;
using namespace testgerms;

namespace {

LocalInvariants local(const GermSpec& s) { return local_invariants(derive_indices(s), s.fiber, s.params); }

// h = 0, n = 2, g = 3: one 4-fold point on the fiber line, transverse branches.
GermSpec h0_single_four() {
    GermSpec s = base(3, 0, 2);
    s.forest = {node(4, {{"C0", 1}})};
    s.horizontal.branches.assign(s.params.r, 1);
    return s;
}

}  // namespace

TEST(Invariants, ChainOfTopPointsN3) {
    LocalInvariants L = local(chain_r(4, 3, 1));
    EXPECT_EQ(L.K2, 5);
    EXPECT_EQ(L.chi, rat(2, 3));
    EXPECT_EQ(L.e, 3);
    ASSERT_TRUE(L.Ind);
    EXPECT_EQ(*L.Ind, rat(9, 5));
    EXPECT_EQ(L.sigma, rat(-1, 3));
}

TEST(Invariants, ZeroGermIsZero) {
    LocalInvariants L = local(base(4, 1, 3));
    EXPECT_EQ(L.K2, 0);
    EXPECT_EQ(L.chi, 0);
    EXPECT_EQ(L.e, 0);
    EXPECT_EQ(*L.Ind, 0);
    EXPECT_EQ(L.sigma, 0);
    EXPECT_FALSE(L.lambda_local);
    LocalInvariants Z = local(base(3, 0, 2));
    EXPECT_EQ(Z.K2, 0);
    EXPECT_EQ(Z.chi, 0);
    EXPECT_EQ(Z.e, 0);
    EXPECT_FALSE(Z.Ind);
}

TEST(Invariants, OddChainN2) {
    LocalInvariants L = local(odd_chain(3, 1));
    EXPECT_EQ(L.K2, 5);
    EXPECT_EQ(L.chi, rat(1, 2));
    EXPECT_EQ(L.e, 1);
    EXPECT_EQ(*L.Ind, 3);
    EXPECT_EQ(*L.lambda_local, 10);
    EXPECT_EQ(signature(L), 1);
}

TEST(Invariants, TwoCurveConfigurationN3) {
    GermSpec s = n3_config(7);
    LocalInvariants L = local(s);
    EXPECT_EQ(L.chi, rat(4 * 6 - 13, 6));
    EXPECT_EQ(L.e, 4);
}

TEST(Invariants, SingleFourPointGenusZeroBase) {
    LocalInvariants L = local(h0_single_four());
    EXPECT_EQ(L.K2, rat(10, 7));
    EXPECT_EQ(L.chi, rat(2, 7));
    EXPECT_EQ(L.e, 2);
}

TEST(Invariants, TripleFiber) {
    LocalInvariants L = local(triple_403());
    EXPECT_EQ(L.K2, rat(43, 5));
    EXPECT_EQ(L.chi, rat(17, 15));
    EXPECT_EQ(L.e, 5);
    EXPECT_EQ(*L.lambda_local, rat(129, 17));
}

TEST(Invariants, LocalNoetherOnWorkedGerms) {
    for (const GermSpec& s : {chain_r(4, 3, 1), chain_r(13, 4, 2), odd_chain(3, 2), odd_chain(5, 1), n3_config(7),
                              n3_config(10), triple_403(), h0_single_four()}) {
        LocalInvariants L = local(s);
        EXPECT_EQ(L.K2 + L.e, 12 * L.chi) << s.params.g << " " << s.params.n;
    }
}

TEST(Invariants, IndMatchesSlopeEquality) {
    for (const GermSpec& s : {chain_r(4, 3, 1), chain_r(13, 4, 3), odd_chain(3, 2), n3_config(7)}) {
        LocalInvariants L = local(s);
        EXPECT_EQ(*L.Ind, L.K2 - lambda_slope(s.params) * L.chi);
    }
}

TEST(Invariants, SingularFiberBaseTerm) {
    // zero indices over I_1: only the elliptic Euler term contributes
    GermSpec s = base(3, 1, 2, FiberKind::I, 1);
    LocalInvariants L = local(s);
    EXPECT_EQ(L.e, 2);
    EXPECT_EQ(L.chi, rat(5, 24));  // includes the r(n+1)(n-1)/(12n) chi_phi term
    EXPECT_EQ(L.K2 + L.e, 12 * L.chi);
    GlobalInvariants G = aggregate({L}, s.params);
    EXPECT_EQ(slope_equality_check(G, s.params), 0);
}

TEST(Invariants, CoefficientSignatureDiffersFromIndexTheorem) {
    // the closed coefficient formula disagrees with K2 - 8 chi on a single 3-point
    GermSpec s = chain_r(4, 3, 1);
    IndexRecord I = derive_indices(s);
    LocalInvariants L = local_invariants(I, s.fiber, s.params);
    EXPECT_NE(coefficient_sigma_h1(I, s.fiber, s.params), L.sigma);
    // alpha_k coefficient of K2 - 8 chi is (n+1)(n-1)k/3 - n
    EXPECT_EQ(L.sigma, rat(8 * 1, 3) - 3);
    // on the zero germ over I_1 both agree (only chi_phi enters)
    GermSpec z = base(4, 1, 3, FiberKind::I, 1);
    IndexRecord Z = derive_indices(z);
    EXPECT_EQ(coefficient_sigma_h1(Z, z.fiber, z.params), local_invariants(Z, z.fiber, z.params).sigma);
}

TEST(Invariants, AggregateIsLinear) {
    GermSpec s = chain_r(4, 3, 1);
    LocalInvariants L = local(s);
    GlobalInvariants G = aggregate({L, L}, s.params);
    EXPECT_EQ(G.K2, 10);
    EXPECT_EQ(G.chi, rat(4, 3));
    EXPECT_EQ(G.e, 6);
    EXPECT_EQ(G.lambda, rat(15, 2));
    EXPECT_EQ(G.ind_sum, rat(18, 5));
    EXPECT_EQ(slope_equality_check(G, s.params), 0);
    EXPECT_EQ(signature(G), 2 * signature(L));
    GlobalInvariants one = aggregate({L}, s.params);
    EXPECT_EQ(one.K2, L.K2);
    EXPECT_EQ(one.chi, L.chi);
}

TEST(Invariants, EmptyAggregateIsLocallyTrivial) {
    try {
        aggregate({}, compute_params(4, 1, 3));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::LocallyTrivial);
    }
}

TEST(Invariants, WrongBaseGenus) {
    GermSpec s = triple_403();
    IndexRecord I = derive_indices(s);
    EXPECT_THROW(local_invariants_h1(I, s.fiber, s.params), Error);
    EXPECT_THROW(local_invariants_h0(derive_indices(odd_chain(3, 1)), compute_params(3, 1, 2)), Error);
}

TEST(Invariants, Gonality) {
    EXPECT_EQ(fibration_gonality(compute_params(3, 0, 2), 1), 2);
    EXPECT_FALSE(fibration_gonality(compute_params(3, 1, 2), 2));
    EXPECT_FALSE(fibration_gonality(compute_params(10, 1, 3), 2));
}
