#include "fibcalc/invariants.hpp"
#include "fibcalc/io.hpp"
#include "support/germs.hpp"

#include <gtest/gtest.h>

using namespace fibcalc;
using namespace testgerms;

namespace {

std::string fixture(const std::string& name) { return std::string(FIBCALC_SOURCE_DIR) + "/tests/fixtures/" + name; }

ErrorCode parse_code(const std::string& text, bool allow_adjust = false) {
    try {
        parse_germ_file(text, allow_adjust);
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "parsed: " << text;
    return ErrorCode::InvalidArgument;
}

const char* kHeader = R"({"params": {"g": 3, "h": 1, "n": 2}, "germs": [)";

std::string file_with(const std::string& germs) { return std::string(kHeader) + germs + "]}"; }

}  // namespace

TEST(Io, RoundTripIsCanonical) {
    std::vector<GermSpec> all = {chain_r(4, 3, 1), chain_r(13, 4, 2), odd_chain(5, 2), n3_config(7), triple_403()};
    for (const GermSpec& s : all) {
        GermFile f = parse_germ_file(render_germ_file(s.params, {s}));
        ASSERT_EQ(f.germs.size(), 1u);
        GermSpec back = f.germs[0].spec;
        EXPECT_EQ(back, canonical_form(s));
        EXPECT_EQ(canonical_key(back), canonical_key(s));
        // rendering the parsed germ again gives the same bytes
        EXPECT_EQ(render_germ_file(s.params, {back}), render_germ_file(s.params, {s}));
    }
}

TEST(Io, NonStandardFiberRoundTrips) {
    GermSpec s = base(3, 1, 2, FiberKind::I, 2);
    s.fiber.components[0].singular = true;
    std::string text = render_germ_file(s.params, {s});
    EXPECT_NE(text.find("components"), std::string::npos);
    EXPECT_EQ(parse_germ_file(text).germs[0].spec.fiber, s.fiber);
}

TEST(Io, MissingIdsBecomePaths) {
    GermFile f = parse_germ_file(
        file_with(R"({"fiber": {"kind": "Smooth"}, "forest": [{"m": 3, "on": ["C0"], "children": [{"m": 4}]}]})"));
    const GermSpec& s = f.germs[0].spec;
    EXPECT_EQ(s.forest[0].id, "0");
    EXPECT_EQ(s.forest[0].children[0].id, "0.0");
}

TEST(Io, CurveRefForms) {
    GermFile f = parse_germ_file(
        file_with(R"({"fiber": {"kind": "III"}, "forest": [{"m": 3, "on": ["C0", ["C1", 2]]}]})"));
    const auto& on = f.germs[0].spec.forest[0].on;
    ASSERT_EQ(on.size(), 2u);
    EXPECT_EQ(on[0].curve, "C0");
    EXPECT_EQ(on[0].mult, 1);
    EXPECT_EQ(on[1].mult, 2);
}

TEST(Io, Rejections) {
    EXPECT_EQ(parse_code("{not json"), ErrorCode::ParseError);
    EXPECT_EQ(parse_code(file_with(R"({"fiber": {"kind": "Smooth"}, "colour": 1})")), ErrorCode::ParseError);
    EXPECT_EQ(parse_code(file_with(R"({"fiber": {"kind": "Sixfold"}})")), ErrorCode::ParseError);
    EXPECT_EQ(parse_code(file_with(R"({"label": "a"})")), ErrorCode::ParseError);
    EXPECT_EQ(parse_code(file_with(R"({"label": "a", "fiber": {"kind": "Smooth"}},
                                      {"label": "a", "fiber": {"kind": "Smooth"}})")),
              ErrorCode::ParseError);
    EXPECT_EQ(parse_code(R"({"germs": []})"), ErrorCode::ParseError);
    // bad triples surface as the parameter error, not a parse error
    EXPECT_EQ(parse_code(R"({"params": {"g": 5, "h": 1, "n": 3}, "germs": []})"), ErrorCode::RNotMultipleOfN);
}

TEST(Io, AdjustOnlyWhenAllowed) {
    std::string text = file_with(R"({"fiber": {"kind": "Smooth"}, "adjust": {"kappa": 1}})");
    EXPECT_EQ(parse_code(text), ErrorCode::ParseError);
    GermFile f = parse_germ_file(text, true);
    EXPECT_EQ(f.germs[0].adjust.at("kappa"), 1);
}

TEST(Io, ApplyAdjust) {
    IndexRecord I = derive_indices(odd_chain(3, 1));
    IndexRecord J = I;
    apply_adjust(J, {{"kappa", 1}, {"alpha_nZ:1", -1}, {"j_prime:0:1", 2}, {"gamma", 3}});
    EXPECT_EQ(J.kappa, I.kappa + 1);
    EXPECT_EQ(J.alpha_nZ[1], I.alpha_nZ[1] - 1);
    EXPECT_EQ((J.j_prime[{0, 1}]), (I.j_prime[{0, 1}] + 2));
    EXPECT_EQ(J.gamma, I.gamma + 3);
    EXPECT_THROW(apply_adjust(J, {{"nothing", 1}}), Error);
    EXPECT_THROW(apply_adjust(J, {{"alpha_nZ", 1}}), Error);
}

TEST(Io, Fixtures) {
    GermFile chain = read_germ_file(fixture("alternating-odd-chain.json"));
    ASSERT_EQ(chain.germs.size(), 1u);
    EXPECT_TRUE(validate_germ(chain.germs[0].spec).empty());
    LocalInvariants L = local_invariants(derive_indices(chain.germs[0].spec), chain.germs[0].spec.fiber, chain.params);
    EXPECT_EQ(*L.lambda_local, 10);

    GermFile triple = read_germ_file(fixture("h0-triple-fiber.json"));
    EXPECT_EQ(triple.params.h, 0);
    EXPECT_TRUE(validate_germ(triple.germs[0].spec).empty());

    EXPECT_THROW(read_germ_file(fixture("corrupted-involved-point-count.json")), Error);
    GermFile bad = read_germ_file(fixture("corrupted-involved-point-count.json"), true);
    EXPECT_EQ(bad.germs[0].adjust.at("kappa"), 1);

    for (const char* name : {"perturb-odd-chain.json", "perturb-n3-config.json", "perturb-triple-fiber.json"}) {
        GermFile f = read_germ_file(fixture(name), true);
        EXPECT_FALSE(f.germs.empty()) << name;
        for (const auto& e : f.germs) EXPECT_FALSE(e.adjust.empty()) << e.spec.label;
    }
    EXPECT_THROW(read_germ_file(fixture("no-such-file.json")), Error);
}
