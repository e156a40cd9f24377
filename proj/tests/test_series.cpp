#include <random>

#include <gtest/gtest.h>

#include "fgld/multiseries.hpp"

using namespace fgld;

namespace {

RationalSeries var(const SpacePtr& sp, const std::string& name) { return RationalSeries::variable(sp, name, 0); }

RationalSeries parse(const SpacePtr& sp, const std::string& text) { return RationalSeries::parse(sp, 0, text); }

/// Random series in x with integer coefficients in [-3, 3].
RationalSeries random_series(std::mt19937_64& rng, const SpacePtr& sp, int min_deg, bool unit_linear) {
    std::vector<std::pair<std::vector<int>, PLocalRational>> terms;
    for (int e = min_deg; e <= sp->formal_cap(); ++e) {
        std::vector<int> ex(sp->nvars(), 0);
        ex[0] = e;
        long c = static_cast<long>(rng() % 7) - 3;
        if (e == 1 && unit_linear && c == 0) c = 1;
        terms.emplace_back(ex, PLocalRational(c));
    }
    return RationalSeries::from_terms(sp, 0, terms);
}

}  // namespace

TEST(MultiSeries, ProductExamples) {
    const auto sp = SeriesSpace::make({"x", "y"}, {}, 6);
    const auto x = var(sp, "x"), y = var(sp, "y");
    EXPECT_EQ((x + y) * (x - y), x * x - y * y);
    const auto s = parse(sp, "x + 3*x*y - 1/2*y^4");
    EXPECT_EQ(s * RationalSeries::constant(sp, 1), s);
    EXPECT_TRUE((x.pow(6) * x).is_zero());
}

TEST(MultiSeries, SpaceMismatch) {
    const auto a = SeriesSpace::make({"x"}, {}, 4), b = SeriesSpace::make({"x"}, {}, 5);
    try {
        (void)(var(a, "x") * var(b, "x"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::VariableMismatch);
    }
}

TEST(MultiSeries, UCapTruncation) {
    const auto sp = SeriesSpace::make({"x"}, {"u1"}, 4, 3);
    const auto u = var(sp, "u1");
    EXPECT_TRUE(u.pow(3).is_zero());
    EXPECT_FALSE(u.pow(2).is_zero());
}

TEST(MultiSeries, CanonicalOrderAndRender) {
    const auto sp = SeriesSpace::make({"x", "y"}, {"u1"}, 6);
    const auto s = parse(sp, "y^2 + x + x^2*u1 - 2*x*y");
    EXPECT_EQ(s.render(), "x + x^2*u1 - 2*x*y + y^2");
}

TEST(MultiSeries, ComposeExamples) {
    const auto sp = SeriesSpace::make({"x", "y"}, {}, 5);
    const auto x = var(sp, "x"), y = var(sp, "y");
    const auto s = x * x + y;
    EXPECT_EQ(s.compose({{"x", x + y}}), parse(sp, "x^2 + 2*x*y + y^2 + y"));
    EXPECT_THROW(s.compose({{"x", x + RationalSeries::constant(sp, 1)}}), Error);
}

TEST(MultiSeries, InverseOfNonUnit) {
    const auto sp = SeriesSpace::make({"x"}, {}, 5);
    try {
        (void)var(sp, "x").invert_unit();
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NonUnitConstantTerm);
    }
}

TEST(MultiSeries, ReversionOfNonUnitLinear) {
    const auto sp = SeriesSpace::make({"x"}, {}, 5);
    try {
        (void)(var(sp, "x").pow(2)).reversion();
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NonUnitLinearCoefficient);
    }
    EXPECT_THROW((var(sp, "x") + RationalSeries::constant(sp, 1)).reversion(), Error);
}

TEST(MultiSeries, ReversionExample) {
    const auto sp = SeriesSpace::make({"x"}, {}, 5);
    const auto x = var(sp, "x");
    // x/(1-x) reverses to x/(1+x).
    EXPECT_EQ((x + x.pow(2) + x.pow(3) + x.pow(4) + x.pow(5)).reversion(), parse(sp, "x - x^2 + x^3 - x^4 + x^5"));
}

TEST(MultiSeriesProperty, MultiplicationAssociatesAndDistributes) {
    std::mt19937_64 rng(11);
    const auto sp = SeriesSpace::make({"x"}, {}, 8);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = random_series(rng, sp, 0, false), b = random_series(rng, sp, 0, false),
                   c = random_series(rng, sp, 0, false);
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ(a * b, b * a);
    }
}

TEST(MultiSeriesProperty, CompositionAssociates) {
    std::mt19937_64 rng(12);
    const auto sp = SeriesSpace::make({"x"}, {}, 7);
    for (int trial = 0; trial < 20; ++trial) {
        const auto f = random_series(rng, sp, 0, false), g = random_series(rng, sp, 1, false),
                   h = random_series(rng, sp, 1, false);
        EXPECT_EQ(f.compose({{"x", g}}).compose({{"x", h}}), f.compose({{"x", g.compose({{"x", h}})}}));
    }
}

TEST(MultiSeriesProperty, ReversionIsTwoSidedInverse) {
    std::mt19937_64 rng(13);
    const auto sp = SeriesSpace::make({"x"}, {}, 7);
    const auto x = var(sp, "x");
    for (int trial = 0; trial < 50; ++trial) {
        const auto f = random_series(rng, sp, 1, true);
        const auto r = f.reversion();
        EXPECT_EQ(f.compose({{"x", r}}), x);
        EXPECT_EQ(r.compose({{"x", f}}), x);
    }
}

TEST(MultiSeriesProperty, UnitInverse) {
    std::mt19937_64 rng(14);
    const auto sp = SeriesSpace::make({"x"}, {}, 7);
    for (int trial = 0; trial < 50; ++trial) {
        auto s = random_series(rng, sp, 1, false) + RationalSeries::constant(sp, static_cast<long>(rng() % 5) + 1);
        EXPECT_EQ(s * s.invert_unit(), RationalSeries::constant(sp, 1));
    }
}

TEST(MultiSeriesProperty, RenderParseRoundTrip) {
    std::mt19937_64 rng(15);
    const auto sp = SeriesSpace::make({"x", "y"}, {"u1"}, 6);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::pair<std::vector<int>, PLocalRational>> terms;
        for (int k = 0; k < 6; ++k) {
            std::vector<int> e{static_cast<int>(rng() % 4), static_cast<int>(rng() % 3), static_cast<int>(rng() % 3)};
            terms.emplace_back(e, PLocalRational(mpz_class(static_cast<long>(rng() % 11) - 5),
                                                 mpz_class(static_cast<long>(rng() % 4) + 1)));
        }
        const auto s = RationalSeries::from_terms(sp, 0, terms);
        EXPECT_EQ(RationalSeries::parse(sp, 0, s.render()), s) << s.render();
    }
    const auto sp2 = SeriesSpace::make({"x"}, {}, 4);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::pair<std::vector<int>, PrimeFieldElement>> terms;
        for (int e = 0; e <= 4; ++e) terms.push_back({{e}, PrimeFieldElement(static_cast<long>(rng() % 5), 5)});
        const auto s = ModPSeries::from_terms(sp2, {0, 5}, terms);
        EXPECT_EQ(ModPSeries::parse(sp2, {0, 5}, s.render()), s);
    }
}
