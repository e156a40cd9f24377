#include <algorithm>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace fgld;

namespace {

struct FglCase {
    unsigned p;
    int n;
};

class FglConfigs : public ::testing::TestWithParam<FglCase> {};

std::vector<std::array<long, 3>> residue_terms(const ModPSeries& s) {
    std::vector<std::array<long, 3>> out;
    for (const auto& t : s.terms()) {
        const auto e = s.space()->unpack(t.mono);
        out.push_back({e[0], e.size() > 1 ? e[1] : 0, t.coeff.residue()});
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST(ChromaticConfig, Defaults) {
    const auto c = ChromaticConfig::make(2, 1);
    EXPECT_EQ(c.formal_cap, 6);
    EXPECT_EQ(c.u_precision, 32);
    EXPECT_EQ(c.d(), 2);
    EXPECT_EQ(ChromaticConfig::make(3, 1).d(), 6);
    EXPECT_EQ(ChromaticConfig::make(2, 2).d(), 4);
}

TEST(ChromaticConfig, Rejections) {
    const auto kind = [](auto&& f) {
        try {
            f();
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::ParseError;
    };
    EXPECT_EQ(kind([] { ChromaticConfig::make(4, 1); }), ErrorKind::InvalidConfig);
    EXPECT_EQ(kind([] { ChromaticConfig::make(2, 0); }), ErrorKind::InvalidConfig);
    EXPECT_EQ(kind([] { ChromaticConfig::make(2, 1, 4); }), ErrorKind::InvalidConfig);
    EXPECT_EQ(kind([] { ChromaticConfig::make(2, 1, std::nullopt, 1); }), ErrorKind::InvalidConfig);
}

TEST(Fgl, CPolyAndGamma) {
    EXPECT_EQ(c_poly(2, 1).render(), "-x*y");
    EXPECT_EQ(c_poly(3, 1).render(), "-x^2*y - x*y^2");
    EXPECT_EQ(gamma(2, 1, 2), PLocalRational(-1));
    EXPECT_EQ(gamma(3, 1, 3), PLocalRational(-8));
    EXPECT_EQ(gamma(1, 2, 5), PLocalRational(0));
}

TEST(Fgl, LowDegreeTermsAt21) {
    const FormalGroupLaw F = build_fgl(ChromaticConfig::make(2, 1));
    // F = x + y - u1 x y + ... modulo degree 3; the log is x + u1/2 x^2 + ...
    EXPECT_EQ(F.addition.drop_above_formal_degree(2).render(), "x + y - x*y*u1");
    EXPECT_EQ(F.log_series.drop_above_formal_degree(2).render(), "x + 1/2*x^2*u1");
}

TEST_P(FglConfigs, AxiomsAndCongruences) {
    const auto [p, n] = GetParam();
    const FormalGroupLaw F = build_fgl(ChromaticConfig::make(p, n));
    const CheckList ax = verify_fgl_axioms(F);
    for (const auto& c : ax.checks) EXPECT_TRUE(c.passed()) << c.name << ": " << c.detail;
    const CheckList cong = verify_fgl_congruences(F);
    for (const auto& c : cong.checks) EXPECT_TRUE(c.passed()) << c.name << ": " << c.defect.value_or("");
    EXPECT_TRUE(all_p_integral(F.addition, p));
}

TEST_P(FglConfigs, PSeriesRowExamples) {
    const auto [p, n] = GetParam();
    const ChromaticConfig cfg = ChromaticConfig::make(p, n);
    const FormalGroupLaw F = build_fgl(cfg);
    for (const auto& row : pseries_table(F, static_cast<long>(p) * p + 1)) {
        if (row.i == 1) {
            EXPECT_EQ(row.residue.render(), "x");
        } else if (row.i == 0) {
            EXPECT_TRUE(row.residue.is_zero());
        } else if (row.i == static_cast<long>(p) && row.k == n) {
            EXPECT_EQ(row.residue.render(), "x^" + std::to_string(cfg.p_pow(n)) + "*" + cfg.top_u());
        } else if (row.i == static_cast<long>(p) && row.k == n + 1) {
            EXPECT_EQ(row.residue.render(), "x^" + std::to_string(cfg.p_pow(n + 1)));
        }
    }
}

INSTANTIATE_TEST_SUITE_P(DeskScale, FglConfigs, ::testing::Values(FglCase{2, 1}, FglCase{3, 1}, FglCase{2, 2}),
                         [](const auto& info) { return "p" + std::to_string(info.param.p) + "_n" + std::to_string(info.param.n); });

TEST(FglGolden, PSeriesTableAt21) {
    const auto golden = test_support::load_golden("pseries_p2_n1.json");
    const FormalGroupLaw F = build_fgl(ChromaticConfig::make(2, 1));
    const auto rows = pseries_table(F, golden["i_max"].get<long>());
    ASSERT_EQ(rows.size(), golden["rows"].size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& g = golden["rows"][r];
        EXPECT_EQ(rows[r].i, g["i"].get<long>());
        EXPECT_EQ(rows[r].k == 2 ? nlohmann::json("top") : nlohmann::json(rows[r].k), g["k"]);
        const auto expected = g["terms"].get<std::vector<std::array<long, 3>>>();
        EXPECT_EQ(residue_terms(rows[r].residue), expected)
            << rows[r].name(1) << " " << rows[r].residue.render();
    }
}

TEST(ReducedLaw, MatchesGenericRouteAndIsStableInCap) {
    const ChromaticConfig cfg = ChromaticConfig::make(2, 1, std::nullopt, 8);
    const ReducedLaw small = build_reduced_law(cfg, 40, 8);
    const ReducedLaw large = build_reduced_law(cfg, 60, 8);
    for (long k : {-1L, 1L, 2L})
        for (int m = 0; m <= 40; ++m) EXPECT_EQ(small.series(k)[m], large.series(k)[m]) << "k=" << k << " m=" << m;
    EXPECT_TRUE(detail::law_consistency_check(small, reduce_to_un(build_fgl(cfg))).passed());
    // [1](y) = y and [-1](y) = -y + ...
    EXPECT_EQ(small.series(1)[1], USeries::constant(2, 8, 1));
    for (int m = 2; m <= 40; ++m) EXPECT_TRUE(small.series(1)[m].is_zero());
}
