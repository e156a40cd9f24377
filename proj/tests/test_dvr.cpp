#include <random>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace fgld;
using fgld::test_support::context;
using fgld::test_support::random_element;

namespace {

DistinguishedPoly prepare(const ChromaticConfig& cfg, int a_cap) {
    const ReducedLaw law = build_reduced_law(cfg, a_cap, 2);
    const auto wf = weierstrass_prepare(law.series(static_cast<long>(cfg.p)), static_cast<int>(cfg.p_pow(cfg.n)), cfg.d());
    EXPECT_TRUE(weierstrass_reconstruction_check(wf, law.series(static_cast<long>(cfg.p))).passed());
    return wf.distinguished;
}

std::vector<int> u_exponents(const USeries& s) {
    std::vector<int> out;
    for (int t = 0; t < s.precision(); ++t)
        if (s[t]) out.push_back(t);
    return out;
}

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::ParseError;
}

}  // namespace

TEST(Weierstrass, GoldenAt21) {
    const auto golden = test_support::load_golden("g_p2_n1_M8.json");
    const ChromaticConfig cfg = ChromaticConfig::make(2, 1, std::nullopt, golden["u_prec"].get<int>());
    const DistinguishedPoly g = prepare(cfg, default_a_cap(cfg));
    ASSERT_EQ(g.degree() + 1, static_cast<int>(golden["coefficients"].size()));
    for (int i = 0; i <= g.degree(); ++i)
        EXPECT_EQ(g[i].coefficients(), golden["coefficients"][static_cast<std::size_t>(i)].get<std::vector<std::uint32_t>>())
            << "a^" << i;
}

TEST(Weierstrass, KnownPolynomials) {
    const DistinguishedPoly g21 = prepare(ChromaticConfig::make(2, 1), default_a_cap(ChromaticConfig::make(2, 1)));
    EXPECT_EQ(u_exponents(g21[0]), (std::vector<int>{1, 4, 7, 10, 13, 19, 22, 25}));
    EXPECT_TRUE(g21[1].is_zero());
    const DistinguishedPoly g22 = context(2, 2).ring->g();
    EXPECT_EQ(u_exponents(g22[0]), (std::vector<int>{1, 8, 22}));
    for (int i = 1; i < 4; ++i) EXPECT_TRUE(g22[i].is_zero());
    const DistinguishedPoly g31 = context(3, 1).ring->g();
    EXPECT_EQ(g31.render(), "u^1 + a^6 + O(u^32)");
}

TEST(Weierstrass, StableUnderLargerCap) {
    for (auto [p, n] : {std::pair{2u, 1}, std::pair{3u, 1}}) {
        const ChromaticConfig cfg = ChromaticConfig::make(p, n, std::nullopt, 12);
        const int cap = default_a_cap(cfg);
        EXPECT_EQ(prepare(cfg, cap), prepare(cfg, cap + 2 * cfg.d() + 1)) << "p=" << p;
    }
}

TEST(Weierstrass, Deterministic) {
    const ChromaticConfig cfg = ChromaticConfig::make(2, 2, std::nullopt, 10);
    EXPECT_EQ(prepare(cfg, default_a_cap(cfg)), prepare(cfg, default_a_cap(cfg)));
}

TEST(Weierstrass, RejectsNonPreparable) {
    // h = u + a^2: nonzero below the pole order 1.
    UCoeffSeries h{std::vector<USeries>(20, USeries::zero(2, 4))};
    h.coeffs[0] = USeries::monomial(2, 4, 1);
    h.coeffs[2] = USeries::constant(2, 4, 1);
    EXPECT_EQ(kind_of([&] { weierstrass_prepare(h, 1, 1); }), ErrorKind::NotPreparable);
    // a unit below degree d.
    EXPECT_EQ(kind_of([&] { weierstrass_prepare(h, 0, 4); }), ErrorKind::NotPreparable);
    // a-cap too short.
    EXPECT_EQ(kind_of([&] { weierstrass_prepare(h, 0, 10); }), ErrorKind::NotPreparable);
}

TEST(Dvr, RejectsNonEisenstein) {
    DistinguishedPoly g{2, 8, {USeries::monomial(2, 8, 2), USeries::zero(2, 8), USeries::constant(2, 8, 1)}};
    EXPECT_FALSE(eisenstein_check(g));
    EXPECT_EQ(kind_of([&] { DvrRing R(g); }), ErrorKind::NotPreparable);
}

TEST(Dvr, BasicValuations) {
    for (auto [p, n] : {std::pair{2u, 1}, std::pair{3u, 1}, std::pair{2u, 2}}) {
        const DvrRing& R = *context(p, n).ring;
        EXPECT_EQ(R.u().valuation(), R.d());
        EXPECT_EQ(R.a().valuation(), 1);
        EXPECT_EQ(R.pow(R.a(), R.d()).valuation(), R.d());
        EXPECT_FALSE(R.zero().valuation());
        EXPECT_EQ(R.zero().weight().str(), "inf");
        EXPECT_EQ(R.a().weight(), (WeightValue{1, R.d()}));
    }
}

TEST(DvrProperty, RingAxiomsAndMultiplicativeValuation) {
    std::mt19937_64 rng(21);
    for (auto [p, n] : {std::pair{2u, 1}, std::pair{3u, 1}, std::pair{2u, 2}}) {
        const DvrRing& R = *context(p, n).ring;
        for (int trial = 0; trial < 30; ++trial) {
            const DvrElement x = random_element(rng, R), y = random_element(rng, R), z = random_element(rng, R);
            EXPECT_EQ(R.mul(x, y), R.mul(y, x));
            EXPECT_EQ(R.mul(R.mul(x, y), z), R.mul(x, R.mul(y, z)));
            EXPECT_EQ(R.mul(x, y + z), R.mul(x, y) + R.mul(x, z));
            // Multiply by a^s u^t to get elements of controlled valuation.
            const int s = static_cast<int>(rng() % R.d()), t = static_cast<int>(rng() % 4);
            const DvrElement xs = R.mul(x, R.monomial(t, s));
            const auto vx = x.valuation(), vy = y.valuation();
            if (vx && vy && *vx + *vy + s + t * R.d() < static_cast<long>(R.precision()) * R.d() / 2) {
                EXPECT_EQ(R.mul(xs, y).valuation(), *vx + *vy + s + static_cast<long>(t) * R.d());
            }
        }
    }
}

TEST(DvrProperty, ExactDivisionByAPowers) {
    std::mt19937_64 rng(22);
    for (auto [p, n] : {std::pair{2u, 1}, std::pair{3u, 1}, std::pair{2u, 2}}) {
        const DvrRing& R = *context(p, n).ring;
        for (int trial = 0; trial < 30; ++trial) {
            const DvrElement x = random_element(rng, R);
            const long v = static_cast<long>(rng() % (3 * R.d()));
            const DvrElement q = R.divide_by_a_power(R.mul(x, R.pow(R.a(), v)), v);
            EXPECT_EQ(q, x.truncated(q.precision()));
            EXPECT_GE(q.precision(), R.precision() - (v + R.d() - 1) / R.d() - 1);
        }
        EXPECT_EQ(kind_of([&] { R.divide_by_a_power(R.u(), R.d() + 1); }), ErrorKind::InexactDivision);
    }
}

TEST(DvrProperty, UnitInverse) {
    std::mt19937_64 rng(23);
    for (auto [p, n] : {std::pair{2u, 1}, std::pair{3u, 1}}) {
        const DvrRing& R = *context(p, n).ring;
        for (int trial = 0; trial < 20; ++trial) {
            DvrElement x = random_element(rng, R);
            if (x[0][0] == 0) x = x + R.one();
            EXPECT_EQ(R.mul(x, R.unit_inverse(x)), R.one());
        }
        EXPECT_EQ(kind_of([&] { R.unit_inverse(R.a()); }), ErrorKind::NonUnitConstantTerm);
    }
}

TEST(Dvr, ThetaIsAUnitWithAdEqualsUTheta) {
    const DvrRing& R = *context(2, 2).ring;
    EXPECT_EQ(R.theta().valuation(), 0);
    const DvrElement ut = R.mul(R.u(), R.theta());
    EXPECT_EQ(R.pow(R.a(), R.d()).truncated(ut.precision()), ut);
}

TEST(Dvr, EvaluationNeedsEnoughTerms) {
    const DvrRing& R = *context(2, 1).ring;
    UCoeffSeries shortser{std::vector<USeries>(5, USeries::constant(2, R.precision(), 1))};
    EXPECT_EQ(kind_of([&] { R.evaluate(shortser, R.a()); }), ErrorKind::PrecisionExhausted);
    EXPECT_EQ(kind_of([&] { R.evaluate(shortser, R.one()); }), ErrorKind::NonUnitConstantTerm);
}

TEST(Psi, ValuationAndWeight) {
    for (auto [p, n] : {std::pair{2u, 1}, std::pair{3u, 1}, std::pair{2u, 2}}) {
        const auto& ctx = context(p, n);
        EXPECT_EQ(ctx.psi.valuation(), static_cast<long>(p) - 1);
        EXPECT_EQ(ctx.psi.weight(), (WeightValue{static_cast<long>(p) - 1, ctx.ring->d()}));
        const PsiResult both = compute_psi(ctx.law, *ctx.ring);
        EXPECT_EQ(both.psi_negative.valuation(), static_cast<long>(p) - 1);
    }
    EXPECT_EQ(context(2, 1).psi.weight().str(), "1/2");
}

TEST(AlgebraRender, MonomialOrder) {
    const DvrRing& R = *context(3, 1).ring;
    EXPECT_EQ((R.monomial(2, 1) + R.monomial(0, 3).scaled(2) + R.one()).render(), "1 + u^2*a^1 + 2*a^3 + O(u^32)");
}
