#pragma once

// The p-typical formal group law with Hazewinkel-type generators
// v_k = u_k (1 <= k <= n), v_{n+1} = 1 and v_j = 0 otherwise, built exactly
// over the p-local rationals, plus the congruences it is expected to satisfy.

#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "checks.hpp"
#include "errors.hpp"
#include "multiseries.hpp"
#include "scalar.hpp"

namespace fgld {

inline long ipow(long b, int e) {
    long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

struct ChromaticConfig {
    unsigned p = 2;
    int n = 1;             ///< the height is n + 1
    int formal_cap = 0;    ///< D: inclusive cap on total degree in x, y, z
    int u_precision = 32;  ///< M: identities in u_n are asserted modulo u_n^M

    static ChromaticConfig make(unsigned p, int n, std::optional<int> formal_cap = std::nullopt,
                                std::optional<int> u_precision = std::nullopt) {
        validate_prime(p);
        if (n < 1) throw Error(ErrorKind::InvalidConfig, "n must be positive");
        if (n > 6) throw Error(ErrorKind::InvalidConfig, "n > 6 is outside the supported range");
        ChromaticConfig c;
        c.p = p;
        c.n = n;
        c.formal_cap = formal_cap.value_or(static_cast<int>(ipow(p, n + 1)) + 2);
        c.u_precision = u_precision.value_or(32);
        c.validate();
        return c;
    }

    void validate() const {
        if (formal_cap < ipow(p, n + 1) + 1)
            throw Error(ErrorKind::InvalidConfig,
                        "formal degree cap must be at least p^{n+1}+1 = " + std::to_string(ipow(p, n + 1) + 1));
        if (u_precision < 2) throw Error(ErrorKind::InvalidConfig, "u-precision must be at least 2");
    }

    long p_pow(int k) const { return ipow(p, k); }
    /// Degree of the distinguished polynomial, p^{n+1} - p^n.
    int d() const { return static_cast<int>(ipow(p, n + 1) - ipow(p, n)); }

    std::vector<std::string> u_names() const {
        std::vector<std::string> names;
        for (int k = 1; k <= n; ++k) names.push_back("u" + std::to_string(k));
        return names;
    }
    std::string top_u() const { return "u" + std::to_string(n); }
};

struct FormalGroupLaw {
    ChromaticConfig config;
    SpacePtr x_space;   ///< {x} ; u_1..u_n
    SpacePtr xy_space;  ///< {x, y} ; u_1..u_n
    RationalSeries log_series;
    RationalSeries exp_series;
    RationalSeries addition;
    ModPSeries reduced_addition;
};

/// C_{p^m}(x, y) = (x^{p^m} + y^{p^m} - (x+y)^{p^m}) / p, an integral polynomial.
inline RationalSeries c_poly(unsigned p, int m, const SpacePtr& xy_space) {
    const long q = ipow(p, m);
    std::vector<std::pair<std::vector<int>, PLocalRational>> terms;
    const std::size_t nv = xy_space->nvars();
    for (long i = 1; i < q; ++i) {
        mpz_class binom;
        mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(i));
        std::vector<int> e(nv, 0);
        e[0] = static_cast<int>(i);
        e[1] = static_cast<int>(q - i);
        terms.emplace_back(e, PLocalRational(mpz_class(-binom), mpz_class(p)));
    }
    return RationalSeries::from_terms(xy_space, PLocalRational(0), terms);
}

inline RationalSeries c_poly(unsigned p, int m) {
    return c_poly(p, m, SeriesSpace::make({"x", "y"}, {}, static_cast<int>(ipow(p, m))));
}

/// gamma_{i,k} = (i - i^{p^k}) / p; an integer by Fermat.
inline PLocalRational gamma(long i, int k, unsigned p) {
    mpz_class ip;
    mpz_class base(i);
    mpz_pow_ui(ip.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(ipow(p, k)));
    return PLocalRational(mpz_class(base - ip), mpz_class(p));
}

/// Log coefficients m_j (j with p^j <= max_degree) from p*m_j = sum_{i<j} m_i v_{j-i}^{p^i},
/// as series of formal degree 0 in `space`. `generator(k)` returns v_k.
template <class Gen>
std::vector<RationalSeries> log_coefficients(unsigned p, int max_degree, const SpacePtr& space, Gen generator) {
    std::vector<RationalSeries> m;
    m.push_back(RationalSeries::constant(space, PLocalRational(1)));
    const PLocalRational inv_p(mpz_class(1), mpz_class(p));
    for (int j = 1; ipow(p, j) <= max_degree; ++j) {
        RationalSeries acc(space, PLocalRational(0));
        for (int i = 0; i < j; ++i) {
            const RationalSeries v = generator(j - i);
            if (v.is_zero()) continue;
            acc += m[static_cast<std::size_t>(i)] * v.pow(static_cast<int>(ipow(p, i)));
        }
        m.push_back(acc.scaled(inv_p));
    }
    return m;
}

inline FormalGroupLaw build_fgl(const ChromaticConfig& config) {
    config.validate();
    const unsigned p = config.p;
    const int D = config.formal_cap;
    const auto u = config.u_names();
    FormalGroupLaw F{config,
                     SeriesSpace::make({"x"}, u, D),
                     SeriesSpace::make({"x", "y"}, u, D),
                     RationalSeries(nullptr, 0),
                     RationalSeries(nullptr, 0),
                     RationalSeries(nullptr, 0),
                     ModPSeries(nullptr, PrimeFieldElement(0, p))};

    auto generator = [&](int k) {
        if (k >= 1 && k <= config.n) return RationalSeries::variable(F.x_space, u[static_cast<std::size_t>(k - 1)], 0);
        if (k == config.n + 1) return RationalSeries::constant(F.x_space, 1);
        return RationalSeries(F.x_space, 0);
    };
    const auto m = log_coefficients(p, D, F.x_space, generator);
    RationalSeries log(F.x_space, 0);
    for (std::size_t j = 0; j < m.size(); ++j) {
        std::vector<int> e(F.x_space->nvars(), 0);
        e[0] = static_cast<int>(ipow(p, static_cast<int>(j)));
        log += m[j] * RationalSeries::monomial(F.x_space, e, 1);
    }
    F.log_series = log;
    F.exp_series = log.reversion();

    std::vector<std::string> as_x{"x"}, as_y{"y"};
    as_x.insert(as_x.end(), u.begin(), u.end());
    as_y.insert(as_y.end(), u.begin(), u.end());
    const RationalSeries lx = log.remap(F.xy_space, as_x);
    const RationalSeries ly = log.remap(F.xy_space, as_y);
    const RationalSeries ex = F.exp_series.remap(F.xy_space, as_x);
    F.addition = ex.compose({{"x", lx + ly}});

    for (const auto& t : F.addition.terms())
        if (!t.coeff.is_p_integral(p))
            throw Error(ErrorKind::IntegralityFailure, "coefficient " + t.coeff.str() + " of F is not p-integral");
    F.reduced_addition = reduce_series_mod_p(F.addition, p);
    return F;
}

/// Formal inverse iota(x) with F(x, iota(x)) = 0, by Newton iteration on the
/// addition series itself (works for any formal group law in `xy_space`).
template <class T>
MultiSeries<T> formal_inverse(const MultiSeries<T>& addition, const SpacePtr& x_space) {
    const SpacePtr& xy = addition.space();
    const T proto = addition.zero();
    const MultiSeries<T> fy = addition.derivative("y");
    MultiSeries<T> iota = -MultiSeries<T>::variable(x_space, "x", proto);
    for (int iter = 0; iter < 64; ++iter) {
        const MultiSeries<T> iy = iota.restrict_to(xy);
        const MultiSeries<T> value = addition.compose({{"y", iy}}).restrict_to(x_space);
        if (value.is_zero()) return iota;
        const MultiSeries<T> slope = fy.compose({{"y", iy}}).restrict_to(x_space);
        iota = iota - value * slope.invert_unit();
    }
    throw Error(ErrorKind::NonUnitLinearCoefficient, "formal inverse did not converge");
}

inline RationalSeries formal_inverse(const FormalGroupLaw& F) { return formal_inverse(F.addition, F.x_space); }

/// [i]_F(x): [0] = 0, [i] = F([i-1](x), x), [-i] = iota([i](x)).
template <class T>
MultiSeries<T> i_series(const MultiSeries<T>& addition, const SpacePtr& x_space, long i) {
    const T proto = addition.zero();
    const SpacePtr& xy = addition.space();
    if (i < 0) {
        const MultiSeries<T> pos = i_series(addition, x_space, -i);
        if (pos.is_zero()) return pos;
        const MultiSeries<T> iota = formal_inverse(addition, x_space);
        return iota.compose({{"x", pos}});
    }
    const MultiSeries<T> xs = MultiSeries<T>::variable(xy, "x", proto);
    MultiSeries<T> cur(x_space, proto);
    for (long k = 1; k <= i; ++k) {
        if (k == 1) {
            cur = MultiSeries<T>::variable(x_space, "x", proto);
            continue;
        }
        cur = addition.compose({{"x", cur.restrict_to(xy)}, {"y", xs}}).restrict_to(x_space);
    }
    return cur;
}

inline RationalSeries i_series(const FormalGroupLaw& F, long i) { return i_series(F.addition, F.x_space, i); }

/// Unit, symmetry, associativity and integrality of the addition series.
inline CheckList verify_fgl_axioms(const FormalGroupLaw& F) {
    CheckList out;
    const auto u = F.config.u_names();
    const RationalSeries x = RationalSeries::variable(F.x_space, "x", 0);
    const RationalSeries fx0 = F.addition.set_to_zero({"y"}).restrict_to(F.x_space);
    out.add("fgl_unit_left", fx0 == x, "F(x,0) = x", (fx0 - x).render());
    std::vector<std::string> swap{"y", "x"};
    swap.insert(swap.end(), u.begin(), u.end());
    const RationalSeries f0y = F.addition.set_to_zero({"x"}).remap(F.xy_space, swap).restrict_to(F.xy_space);
    const RationalSeries xx = RationalSeries::variable(F.xy_space, "x", 0);
    out.add("fgl_unit_right", f0y == xx, "F(0,y) = y", (f0y - xx).render());

    const RationalSeries swapped = F.addition.remap(F.xy_space, swap);
    out.add("fgl_symmetry", swapped == F.addition, "F(x,y) = F(y,x)", (swapped - F.addition).render());

    const SpacePtr xyz = SeriesSpace::make({"x", "y", "z"}, u, F.config.formal_cap);
    std::vector<std::string> as_xy{"x", "y"}, as_yz{"y", "z"};
    as_xy.insert(as_xy.end(), u.begin(), u.end());
    as_yz.insert(as_yz.end(), u.begin(), u.end());
    const RationalSeries fxy = F.addition.remap(xyz, as_xy);
    const RationalSeries fyz = F.addition.remap(xyz, as_yz);
    const RationalSeries z = RationalSeries::variable(xyz, "z", 0);
    const RationalSeries left = fxy.compose({{"x", fxy}, {"y", z}});
    const RationalSeries right = fxy.compose({{"y", fyz}});
    out.add("fgl_associativity", left == right, "F(F(x,y),z) = F(x,F(y,z)) to total degree " +
                                                      std::to_string(F.config.formal_cap),
            (left - right).render());

    const bool integral = all_p_integral(F.addition, F.config.p);
    out.add("fgl_integrality", integral, "every coefficient of F is p-integral");
    return out;
}

/// Residue of [i]_F(x) modulo (p, u_1, ..., u_{k-1}, x^{p^k+1}); k = n+1 means
/// modulo (p, u_1, ..., u_n, x^{p^{n+1}+1}).
inline ModPSeries pseries_residue(const FormalGroupLaw& F, const RationalSeries& i_ser, int k) {
    const auto u = F.config.u_names();
    std::vector<std::string> killed(u.begin(), u.begin() + std::min<int>(k - 1, F.config.n));
    return reduce_series_mod_p(i_ser.set_to_zero(killed).drop_above_formal_degree(static_cast<int>(F.config.p_pow(k))),
                               F.config.p);
}

/// i*x + u_k * gamma * x^{p^k} reduced mod p (no u factor when k = n+1).
inline ModPSeries pseries_expected(const FormalGroupLaw& F, long i, int k, const PLocalRational& gamma_value) {
    const unsigned p = F.config.p;
    const PrimeFieldElement zero(0, p);
    std::vector<int> ex(F.x_space->nvars(), 0);
    ex[0] = 1;
    ModPSeries expected = ModPSeries::monomial(F.x_space, ex, PrimeFieldElement(i, p));
    std::vector<int> top(F.x_space->nvars(), 0);
    top[0] = static_cast<int>(F.config.p_pow(k));
    if (k <= F.config.n) top[static_cast<std::size_t>(k)] = 1;
    expected += ModPSeries::monomial(F.x_space, top, reduce_mod_p(gamma_value, p));
    return expected;
}

/// One row of the i-series congruence table; k = n+1 is the top case.
struct PSeriesRow {
    long i = 0;
    int k = 1;
    ModPSeries residue;
    ModPSeries expected;
    std::string gamma_readings;  ///< top case only: the k' whose gamma_{i,k'} also match

    bool matches() const { return residue == expected; }
    std::string name(int n) const { return "pseries_i" + std::to_string(i) + (k <= n ? "_k" + std::to_string(k) : "_top"); }
};

inline std::vector<PSeriesRow> pseries_table(const FormalGroupLaw& F, long i_max) {
    const ChromaticConfig& c = F.config;
    std::vector<PSeriesRow> rows;
    for (long i = 0; i <= i_max; ++i) {
        const RationalSeries ser = i_series(F, i);
        for (int k = 1; k <= c.n + 1; ++k) {
            PSeriesRow row{i, k, pseries_residue(F, ser, k), pseries_expected(F, i, k, gamma(i, k, c.p)), {}};
            if (k == c.n + 1) {
                for (int kk = 1; kk <= c.n + 1; ++kk)
                    if (row.residue == pseries_expected(F, i, k, gamma(i, kk, c.p)))
                        row.gamma_readings += (row.gamma_readings.empty() ? "" : ",") + std::to_string(kk);
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

/// Both displayed congruences on F and the i-series table for 0 <= i <= p^2+1.
inline CheckList verify_fgl_congruences(const FormalGroupLaw& F) {
    CheckList out;
    const ChromaticConfig& c = F.config;
    const auto u = c.u_names();
    const RationalSeries xy = RationalSeries::variable(F.xy_space, "x", 0) + RationalSeries::variable(F.xy_space, "y", 0);

    for (int k = 1; k <= c.n + 1; ++k) {
        std::vector<std::string> killed(u.begin(), u.begin() + std::min(k - 1, c.n));
        const int top = static_cast<int>(c.p_pow(k));
        const RationalSeries residue = F.addition.set_to_zero(killed).drop_above_formal_degree(top);
        RationalSeries cterm = c_poly(c.p, k, F.xy_space);
        if (k <= c.n) cterm = cterm * RationalSeries::variable(F.xy_space, u[static_cast<std::size_t>(k - 1)], 0);
        const RationalSeries expected = xy + cterm;
        const std::string name = k <= c.n ? "fgl_prop_k" + std::to_string(k) : "fgl_prop_top";
        out.add(name, residue == expected,
                k <= c.n ? "F = x + y + u" + std::to_string(k) + "*C_{p^" + std::to_string(k) + "} mod (u_<" +
                               std::to_string(k) + ", deg > " + std::to_string(top) + ")"
                         : "F = x + y + C_{p^{n+1}} mod (u_1..u_n, deg > " + std::to_string(top) + ")",
                (residue - expected).render());
    }

    for (const auto& row : pseries_table(F, static_cast<long>(c.p) * c.p + 1)) {
        std::string detail = "residue " + row.residue.render();
        // The top congruence is stated with gamma_{i,k}; record which readings of k agree.
        if (row.k == c.n + 1) detail += "; gamma_{i,k} readings passing: k in {" + row.gamma_readings + "}";
        out.add(row.name(c.n), row.matches(), detail, (row.residue - row.expected).render());
    }
    return out;
}

}  // namespace fgld
