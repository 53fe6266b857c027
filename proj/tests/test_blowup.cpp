#include "fibcalc/blowup.hpp"
#include "support/germs.hpp"

#include <gtest/gtest.h>

using namespace fibcalc;
using namespace testgerms;

namespace {

void expect_valid(const GermSpec& s) {
    auto v = validate_germ(s);
    for (const auto& x : v) ADD_FAILURE() << x.rule << " at " << x.node << ": " << x.detail;
}

}  // namespace

TEST(Blowup, GeneralFiberIsAllZero) {
    GermSpec s = base(3, 1, 2);
    expect_valid(s);
    IndexRecord I = derive_indices(s);
    EXPECT_EQ(I.sum_alpha(), 0);
    EXPECT_EQ(I.alpha0, 0);
    EXPECT_EQ(I.epsilon, 0);
    EXPECT_EQ(I.eta, 0);
    EXPECT_EQ(I.gamma, 0);
    EXPECT_EQ(I.delta_cyc, 0);
}

TEST(Blowup, OddChainN2) {
    GermSpec s = odd_chain(3, 1);
    expect_valid(s);
    IndexRecord I = derive_indices(s);
    EXPECT_EQ(I.alpha(1), 1);
    EXPECT_EQ(I.alpha(2), 1);
    EXPECT_EQ(I.epsilon, 1);
    EXPECT_EQ(I.jdp(0, 1), 1);
    EXPECT_EQ(I.eta, 1);
    EXPECT_EQ(I.eta_dprime, 1);
    EXPECT_EQ(I.alpha0_minus, 0);
    EXPECT_EQ(I.alpha0, 0);
    EXPECT_EQ(IndexRecord::get(I.alpha_tr, 1), 1);
    EXPECT_EQ(I.eta_bar, 1);
    EXPECT_EQ(I.gamma, 1);
}

TEST(Blowup, OddChainScalesWithLength) {
    for (int l = 1; l <= 3; ++l) {
        IndexRecord I = derive_indices(odd_chain(3, l));
        EXPECT_EQ(I.alpha(1), l);
        EXPECT_EQ(I.alpha(2), l);
        EXPECT_EQ(I.epsilon, l);
        EXPECT_EQ(I.eta, l);
    }
}

TEST(Blowup, ChainOfTopPoints) {
    GermSpec s = chain_r(4, 3, 1);
    expect_valid(s);
    IndexRecord I = derive_indices(s);
    EXPECT_EQ(I.alpha(1), 1);
    EXPECT_EQ(I.sum_alpha(), 1);
    EXPECT_EQ(I.eta, 0);
    IndexRecord I3 = derive_indices(chain_r(13, 4, 3));
    EXPECT_EQ(I3.alpha(2), 3);
}

TEST(Blowup, N3Configuration) {
    GermSpec s = n3_config(7);
    expect_valid(s);
    IndexRecord I = derive_indices(s);
    EXPECT_EQ(I.alpha(1), 4);
    EXPECT_EQ(I.epsilon, 2);
    EXPECT_EQ(I.alpha0_plus, 1);
    EXPECT_EQ(I.forced_alpha0_plus, 1);
    EXPECT_EQ(I.iota, 1);
    EXPECT_EQ(I.kappa, 0);
    EXPECT_EQ(I.eta, 1);
    EXPECT_EQ(I.gamma, 1);
}

TEST(Blowup, TripleFiber403) {
    GermSpec s = triple_403();
    expect_valid(s);
    IndexRecord I = derive_indices(s);
    EXPECT_EQ(I.alpha(1), 4);
    EXPECT_EQ(IndexRecord::get(I.alpha_dprime, 1), 4);
    EXPECT_EQ(I.epsilon, 3);
    EXPECT_EQ(I.j(0, 1), 3);
    EXPECT_EQ(I.eta, 1);
    EXPECT_EQ(I.iota, 2);
    EXPECT_EQ(I.kappa, 1);
    EXPECT_EQ(I.delta_cyc, 0);
    EXPECT_EQ(I.gamma, 2);
    EXPECT_EQ(I.forced_alpha0_plus, 4);
    EXPECT_TRUE(I.triple_fiber);
}

TEST(Blowup, LedgerOfTripleFiber) {
    CurveLedger L = curve_ledger(triple_403());
    const LedgerEntry* c0 = L.find("C0");
    ASSERT_NE(c0, nullptr);
    EXPECT_EQ(c0->L2, -3);
    EXPECT_EQ(c0->RC, 6);
    ASSERT_EQ(c0->columns.size(), 1u);
    EXPECT_EQ(c0->columns[0], (std::vector<int>{4, 4, 3}));
    for (const auto& e : L.entries) {
        if (!e.in_R) continue;
        long kd = 0;
        for (auto [k, d] : e.points) kd += static_cast<long>(k) * d;
        EXPECT_EQ(e.RC, e.L2 + 3 * kd) << e.curve;
    }
}

TEST(Blowup, LedgerOfExceptionalCurves) {
    CurveLedger L = curve_ledger(n3_config(7));
    const LedgerEntry* ex = L.find("E0");
    ASSERT_NE(ex, nullptr);
    EXPECT_EQ(ex->t, 4);
    ASSERT_EQ(ex->columns.size(), 1u);
    EXPECT_EQ(ex->columns[0], (std::vector<int>{4, 3}));
    const LedgerEntry* ey = L.find("E0.0");
    ASSERT_NE(ey, nullptr);
    EXPECT_EQ(ey->columns.size(), 2u);
}

TEST(Blowup, IdentityFailureNamesTheIdentity) {
    GermSpec s = triple_403();
    auto D = detail::derive(s, {});
    D.idx.kappa += 1;
    try {
        detail::check_identities(D.idx, s.fiber);
        FAIL() << "expected an identity failure";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InconsistentForest);
        EXPECT_NE(std::string(e.what()).find("involved-point count"), std::string::npos);
    }
}
