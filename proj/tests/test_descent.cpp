#include <random>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace fgld;
using fgld::test_support::context;
using fgld::test_support::random_useries;

namespace {

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::InvalidConfig;
}

}  // namespace

TEST(ParseUSeries, Forms) {
    EXPECT_EQ(parse_useries("2*u^3 + u^5", 3, 8), USeries(3, {0, 0, 0, 2, 0, 1, 0, 0}));
    EXPECT_EQ(parse_useries("u", 2, 4), USeries::monomial(2, 4, 1));
    EXPECT_EQ(parse_useries("u^1", 2, 4), USeries::monomial(2, 4, 1));
    EXPECT_EQ(parse_useries("1", 2, 4), USeries::constant(2, 4, 1));
    EXPECT_EQ(parse_useries("0,1,1", 2, 4), USeries(2, {0, 1, 1, 0}));
    EXPECT_EQ(parse_useries("[0, 1]", 2, 4), USeries(2, {0, 1, 0, 0}));
    EXPECT_EQ(parse_useries("u + u", 2, 4), USeries::zero(2, 4));
}

TEST(ParseUSeries, Errors) {
    for (const char* bad : {"", "x", "u^", "u3", "u^40", "1,,2", "2*v"})
        EXPECT_EQ(kind_of([&] { parse_useries(bad, 2, 32); }), ErrorKind::ParseError) << bad;
}

TEST(NbarMap, SendsOneToOneAndUToNbar) {
    const auto& ctx = context(2, 1);
    const NbarMap N(*ctx.ring, ctx.nbar);
    const int M = ctx.config.u_precision;
    EXPECT_EQ(N(USeries::constant(2, M, 1)), ctx.ring->one().truncated(N(USeries::constant(2, M, 1)).precision()));
    const DvrElement image = N(USeries::monomial(2, M, 1));
    EXPECT_EQ(image, ctx.nbar.truncated(image.precision()));
}

TEST(NbarMapProperty, Homomorphism) {
    std::mt19937_64 rng(31);
    for (auto [p, n] : {std::pair{2u, 1}, std::pair{3u, 1}, std::pair{2u, 2}}) {
        const auto& ctx = context(p, n);
        const DvrRing& R = *ctx.ring;
        const NbarMap N(R, ctx.nbar);
        for (int trial = 0; trial < 20; ++trial) {
            const USeries x = random_useries(rng, p, 16), y = random_useries(rng, p, 16);
            const auto check = [](const DvrElement& a, const DvrElement& b) {
                const int prec = std::min(a.precision(), b.precision());
                EXPECT_EQ(a.truncated(prec), b.truncated(prec));
            };
            check(N(x * y), R.mul(N(x), N(y)));
            check(N(x + y), N(x) + N(y));
        }
    }
}

TEST(PhiExtract, Range) {
    const DvrRing& R = *context(2, 1).ring;
    EXPECT_EQ(phi_extract(R.u(), 0), USeries::monomial(2, R.precision(), 1));
    EXPECT_TRUE(phi_extract(R.u(), 1).is_zero());
    EXPECT_EQ(kind_of([&] { phi_extract(R.u(), 2); }), ErrorKind::IndexOutOfRange);
    EXPECT_EQ(kind_of([&] { phi_extract(R.u(), -1); }), ErrorKind::IndexOutOfRange);
}

TEST(Descent, UnTerminatesInOneStep) {
    const auto& ctx = context(2, 1);
    const NbarMap N(*ctx.ring, ctx.nbar);
    const DescentTrace t = descent_run(USeries::monomial(2, ctx.config.u_precision, 1), N, ctx.config.d());
    ASSERT_EQ(t.steps.size(), 1u);
    EXPECT_TRUE(t.terminal.is_unit());
    EXPECT_TRUE(trace_is_valid(t));
}

TEST(Descent, UnSquared) {
    const auto& ctx = context(2, 1);
    const NbarMap N(*ctx.ring, ctx.nbar);
    const DescentTrace t = descent_run(USeries::monomial(2, ctx.config.u_precision, 2), N, ctx.config.d());
    EXPECT_TRUE(trace_is_valid(t));
    EXPECT_LE(t.steps.size(), 4u);
    EXPECT_EQ(*t.steps.front().extracted.weight(), 1);
}

TEST(Descent, UnitGivesEmptyTrace) {
    const auto& ctx = context(2, 1);
    const NbarMap N(*ctx.ring, ctx.nbar);
    const DescentTrace t = descent_run(USeries::constant(2, ctx.config.u_precision, 1), N, ctx.config.d());
    EXPECT_TRUE(t.steps.empty());
    EXPECT_TRUE(trace_is_valid(t));
}

TEST(Descent, StepRejectsUnitsAndZero) {
    const auto& ctx = context(2, 1);
    const NbarMap N(*ctx.ring, ctx.nbar);
    const int M = ctx.config.u_precision;
    EXPECT_EQ(kind_of([&] { descent_step(USeries::constant(2, M, 1), N); }), ErrorKind::InvalidConfig);
    EXPECT_EQ(kind_of([&] { descent_step(USeries::zero(2, M), N); }), ErrorKind::PrecisionExhausted);
}

TEST(DescentProperty, StepPicksMinimalWeightCoefficient) {
    std::mt19937_64 rng(32);
    for (auto [p, n] : {std::pair{2u, 1}, std::pair{3u, 1}, std::pair{2u, 2}}) {
        const auto& ctx = context(p, n);
        const NbarMap N(*ctx.ring, ctx.nbar);
        for (int trial = 0; trial < 20; ++trial) {
            const USeries z = random_z(rng, p, ctx.config.u_precision, 10);
            const auto [next, idx] = descent_step(z, N);
            const DvrElement image = N(z);
            for (int i = 0; i < image.degree_bound(); ++i) {
                if (const auto w = image[i].weight()) {
                    EXPECT_LE(*next.weight() * image.degree_bound() + idx, *w * image.degree_bound() + i);
                }
            }
            EXPECT_LT(*next.weight(), *z.weight());
        }
    }
}

TEST(DescentProperty, RandomTracesAreReproducible) {
    DescentOptions opt;
    opt.random = 10;
    opt.seed = 99;
    const Json a = run_descent(opt).descent_traces, b = run_descent(opt).descent_traces;
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.size(), 10u);
}
