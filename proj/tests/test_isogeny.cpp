#include <gtest/gtest.h>

#include "support.hpp"

using namespace fgld;
using fgld::test_support::context;

namespace {

struct Config {
    unsigned p;
    int n;
};

class IsogenyConfigs : public ::testing::TestWithParam<Config> {};

int iso_cap(const ChromaticConfig& c) { return static_cast<int>(c.p_pow(c.n + 1)) + static_cast<int>(c.p) + 2; }

}  // namespace

TEST(FracElement, Normalisation) {
    const DvrRing& R = *context(3, 1).ring;
    const FracElement x(R.mul(R.u(), R.a()), 9);  // u a / a^9 = theta / a^2
    const FracElement n = x.normalized(R);
    EXPECT_EQ(n.shift(), 2);
    EXPECT_EQ(n.numerator().valuation(), 0);
    EXPECT_TRUE(FracElement::equal(R, x, FracElement(R.theta(), 2)));
    EXPECT_THROW(x.integral_value(R, "x"), Error);
    const FracElement y(R.pow(R.a(), 4), 3);
    EXPECT_EQ(y.integral_value(R, "y"), R.a().truncated(y.normalized(R).numerator().precision()));
}

TEST(FracElement, FieldOperations) {
    const DvrRing& R = *context(2, 1).ring;
    const FracElement half_a(R.one(), 1), a(R.a(), 0);
    EXPECT_TRUE(FracElement::equal(R, FracElement::mul(R, half_a, a), FracElement(R.one(), 0)));
    const FracElement s = FracElement::add(R, half_a, a);  // 1/a + a = (1 + a^2)/a
    EXPECT_TRUE(FracElement::equal(R, s, FracElement(R.one() + R.pow(R.a(), 2), 1)));
}

TEST_P(IsogenyConfigs, NormCoordinateShape) {
    const auto [p, n] = GetParam();
    const auto& ctx = context(p, n);
    const DvrRing& R = *ctx.ring;
    const NormCoordinate nc = norm_coordinate(ctx.law, R, iso_cap(ctx.config));
    EXPECT_TRUE(nc.f[0].is_zero());
    EXPECT_EQ(nc.f[1].valuation(), static_cast<long>(p) - 1);
    EXPECT_EQ(nc.linear_unit.valuation(), 0);
    EXPECT_EQ(R.mul(nc.linear_unit, R.pow(R.a(), static_cast<long>(p) - 1)).truncated(nc.f[1].precision()), nc.f[1]);
}

TEST_P(IsogenyConfigs, QuotientSeriesIsIntegralAndConsistent) {
    const auto [p, n] = GetParam();
    const auto& ctx = context(p, n);
    const DvrRing& R = *ctx.ring;
    const int cap = iso_cap(ctx.config);
    const NormCoordinate nc = norm_coordinate(ctx.law, R, cap);
    const RSeries lhs = isogeny_lhs(ctx.law, R, cap);
    const QuotientPSeries q = quotient_p_series(R, nc, lhs, cap);
    EXPECT_TRUE(q.all_integral());
    EXPECT_TRUE(quotient_residual_check(R, q, nc, lhs).passed());
    EXPECT_TRUE(q.coefficients[1].numerator().is_zero());
    for (int i = 1; i < n; ++i) EXPECT_TRUE(q.coefficients[static_cast<std::size_t>(ipow(p, i))].numerator().is_zero());
}

TEST_P(IsogenyConfigs, NbarRoutesAgreeAndFormulaHolds) {
    const auto [p, n] = GetParam();
    const auto& ctx = context(p, n);
    const DvrRing& R = *ctx.ring;
    const DvrElement by_division = nbar_by_division(R, ctx.psi, p, n);
    const int prec = std::min(by_division.precision(), ctx.nbar.precision());
    EXPECT_EQ(by_division.truncated(prec), ctx.nbar.truncated(prec));
    EXPECT_EQ(ctx.nbar.weight(), (WeightValue{static_cast<long>(p) - 1, R.d()}));
    const DvrElement lhs = R.mul(ctx.nbar, R.pow(ctx.psi, ipow(p, n) - 1));
    EXPECT_EQ(lhs, R.u().truncated(lhs.precision()));
    EXPECT_EQ(mainpfact_sign_check(R, ctx.nbar, ctx.psi, p, n).epsilon, 1);
}

INSTANTIATE_TEST_SUITE_P(DeskScale, IsogenyConfigs, ::testing::Values(Config{2, 1}, Config{3, 1}, Config{2, 2}),
                         [](const auto& info) { return "p" + std::to_string(info.param.p) + "_n" + std::to_string(info.param.n); });

TEST(Isogeny, SignAtThreeIsPlus) {
    const auto& ctx = context(3, 1);
    const SignResult s = mainpfact_sign_check(*ctx.ring, ctx.nbar, ctx.psi, 3, 1);
    EXPECT_TRUE(s.plus_holds);
    EXPECT_FALSE(s.minus_holds);
}

TEST(Isogeny, NbarAtThree) {
    const auto& ctx = context(3, 1);
    EXPECT_EQ(ctx.nbar.render().substr(0, 6), "2*a^2 ");
}

TEST(Isogeny, VanishingFailureIsReported) {
    const auto& ctx = context(2, 1);
    QuotientPSeries fake;
    fake.coefficients.assign(4, FracElement(ctx.ring->one(), 0));
    fake.integral.assign(4, true);
    try {
        extract_nbar_un(*ctx.ring, fake, 2, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::PrerequisiteVanishingFailed);
    }
}
