#pragma once

// High-degree data of F after killing (p, u_1, ..., u_{n-1}): the rows
// F(x, y) = sum_j x^j F_j(y) for small j and the i-series [k](y), each as a
// dense series in y over F_p[[u_n]]/u_n^M.
//
// Everything is computed exactly over the rationals from the specialised
// logarithm (only v_n = u_n and v_{n+1} = 1 survive), certified p-integral,
// and only then reduced. Specialising the generators commutes with building F.

#include <map>
#include <string>
#include <vector>

#include "fgl.hpp"
#include "useries.hpp"

namespace fgld {

/// sum_m c_m y^m with c_m in F_p[[u]]/u^M, dense in m.
struct UCoeffSeries {
    std::vector<USeries> coeffs;

    int degree_cap() const { return static_cast<int>(coeffs.size()) - 1; }
    const USeries& operator[](int m) const { return coeffs[static_cast<std::size_t>(m)]; }
    friend bool operator==(const UCoeffSeries& a, const UCoeffSeries& b) { return a.coeffs == b.coeffs; }
};

struct ReducedLaw {
    ChromaticConfig config;
    int a_cap = 0;   ///< y-degree kept in every series
    int x_rows = 0;  ///< rows F_0 .. F_{x_rows}
    std::vector<UCoeffSeries> rows;
    std::map<long, UCoeffSeries> k_series;  ///< [k](y) for -(p-1) <= k <= p

    const UCoeffSeries& series(long k) const { return k_series.at(k); }
};

namespace detail {

inline SpacePtr y_space(const ChromaticConfig& c, int cap) {
    return SeriesSpace::make({"y"}, {c.top_u()}, cap, c.u_precision);
}

/// Inverse of a unit series by Newton iteration with doubling caps.
inline RationalSeries invert_doubling(const ChromaticConfig& c, const RationalSeries& s) {
    const int target = s.space()->formal_cap();
    RationalSeries w = RationalSeries::constant(y_space(c, 0), scalar_inverse(s.coefficient(Monomial(0))));
    // The u-part of the constant term is nilpotent only modulo u^M, so the
    // first stage also iterates at cap 0 until it stabilises.
    for (int cap = 0;; cap = std::min(target, std::max(1, cap * 2))) {
        const SpacePtr sp = y_space(c, cap);
        const RationalSeries sc = s.in_space(sp);
        w = w.in_space(sp);
        const RationalSeries two = RationalSeries::constant(sp, 2);
        for (int iter = 0; iter < 64; ++iter) {
            RationalSeries next = w * (two - sc * w);
            if (next == w) break;
            w = std::move(next);
        }
        if (cap == target) return w;
    }
}

/// L(s) and L'(s) for the sparse logarithm L(t) = sum_j m_j t^{p^j}.
inline std::pair<RationalSeries, RationalSeries> log_and_derivative(unsigned p, const std::vector<RationalSeries>& m,
                                                                   const RationalSeries& s) {
    const SpacePtr& sp = s.space();
    RationalSeries value = m[0].in_space(sp) * s;
    RationalSeries slope = m[0].in_space(sp);
    RationalSeries pw = s;                                                         // s^{p^j}
    RationalSeries qw = RationalSeries::constant(sp, 1);                           // s^{p^j - 1}
    for (std::size_t j = 1; j < m.size(); ++j) {
        const RationalSeries pw_pm1 = pw.pow(static_cast<int>(p) - 1);
        qw = qw * pw_pm1;
        pw = pw_pm1 * pw;
        if (pw.is_zero() && qw.is_zero()) break;
        const RationalSeries mj = m[j].in_space(sp);
        value += mj * pw;
        slope += mj.scaled(PLocalRational(static_cast<long>(ipow(p, static_cast<int>(j))))) * qw;
    }
    return {value, slope};
}

/// Solves L(s) = k L(y) for s = [k](y) by Newton iteration with doubling caps.
inline RationalSeries solve_i_series(const ChromaticConfig& c, const std::vector<RationalSeries>& m, long k, int cap) {
    const SpacePtr top = y_space(c, cap);
    const RationalSeries y_top = RationalSeries::variable(top, "y", 0);
    const RationalSeries target_full = log_and_derivative(c.p, m, y_top).first.scaled(PLocalRational(k));
    RationalSeries s = y_top.scaled(PLocalRational(k)).in_space(y_space(c, 1));
    for (int level = 1; level < cap;) {
        level = std::min(cap, level * 2);
        const SpacePtr sp = y_space(c, level);
        s = s.in_space(sp);
        // One step doubles the y-adic precision; the top level runs until exact.
        for (int iter = 0; iter < 64; ++iter) {
            auto [value, slope] = log_and_derivative(c.p, m, s);
            const RationalSeries defect = value - target_full.in_space(sp);
            if (defect.is_zero()) break;
            s = s - defect * invert_doubling(c, slope);
            if (level < cap) break;
        }
    }
    return s;
}

inline UCoeffSeries to_ucoeff(const ChromaticConfig& c, const RationalSeries& s, int cap, const std::string& what) {
    UCoeffSeries out;
    out.coeffs.assign(static_cast<std::size_t>(cap) + 1, USeries::zero(c.p, c.u_precision));
    for (const auto& t : s.terms()) {
        if (t.fdeg > cap) continue;
        if (!t.coeff.is_p_integral(c.p))
            throw Error(ErrorKind::IntegralityFailure, what + ": coefficient " + t.coeff.str() + " is not p-integral");
        const int ud = t.udeg;
        out.coeffs[static_cast<std::size_t>(t.fdeg)].set(ud, static_cast<long>(reduce_mod_p(t.coeff, c.p).residue()));
    }
    return out;
}

}  // namespace detail

/// The specialised logarithm coefficients m_j as series in {y ; u_n}.
inline std::vector<RationalSeries> specialised_log(const ChromaticConfig& c, int cap) {
    const SpacePtr sp = detail::y_space(c, cap);
    return log_coefficients(c.p, cap, sp, [&](int k) {
        if (k == c.n) return RationalSeries::variable(sp, c.top_u(), 0);
        if (k == c.n + 1) return RationalSeries::constant(sp, 1);
        return RationalSeries(sp, 0);
    });
}

/// Default y-degree: enough for Weierstrass preparation at u-precision M and
/// for every evaluation in the DVR below its horizon M*d.
inline int default_a_cap(const ChromaticConfig& c) {
    return (c.u_precision + 3) * c.d() + static_cast<int>(c.p_pow(c.n));
}

inline ReducedLaw build_reduced_law(const ChromaticConfig& c, int a_cap, int x_rows) {
    ReducedLaw law;
    law.config = c;
    law.a_cap = a_cap;
    law.x_rows = x_rows;

    const int cap = a_cap + x_rows + 1;
    const std::vector<RationalSeries> m = specialised_log(c, cap);
    const SpacePtr sp = detail::y_space(c, cap);
    const RationalSeries y = RationalSeries::variable(sp, "y", 0);

    // F(x,y) = sum_i L(x)^i / i! * E_i(y), E_i = exp^{(i)}(L(y)), E_{i+1} = E_i' / L'(y).
    const RationalSeries inv_slope = detail::invert_doubling(c, detail::log_and_derivative(c.p, m, y).second);
    std::vector<RationalSeries> e{y};
    for (int i = 1; i <= x_rows; ++i) e.push_back(e.back().derivative("y") * inv_slope);

    const SpacePtr xs = SeriesSpace::make({"x"}, {c.top_u()}, x_rows, c.u_precision);
    std::vector<RationalSeries> mx;
    for (const auto& mj : m) mx.push_back(mj.remap(xs, {"x", c.top_u()}));
    const RationalSeries lx = detail::log_and_derivative(c.p, mx, RationalSeries::variable(xs, "x", 0)).first;

    std::vector<RationalSeries> lx_pow{RationalSeries::constant(xs, 1)};
    for (int i = 1; i <= x_rows; ++i) lx_pow.push_back(lx_pow.back() * lx);
    std::vector<mpz_class> factorial{1};
    for (int i = 1; i <= x_rows; ++i) factorial.push_back(factorial.back() * i);

    for (int j = 0; j <= x_rows; ++j) {
        RationalSeries row(sp, 0);
        for (int i = 0; i <= j; ++i) {
            const RationalSeries cx = lx_pow[static_cast<std::size_t>(i)].coefficient_in("x", j);
            if (cx.is_zero()) continue;
            const RationalSeries cy = cx.remap(sp, {"y", c.top_u()})
                                          .scaled(PLocalRational(mpz_class(1), factorial[static_cast<std::size_t>(i)]));
            row += cy * e[static_cast<std::size_t>(i)];
        }
        law.rows.push_back(detail::to_ucoeff(c, row, a_cap, "row " + std::to_string(j) + " of F"));
    }

    for (long k = -static_cast<long>(c.p) + 1; k <= static_cast<long>(c.p); ++k) {
        if (k == 0) {
            law.k_series.emplace(0, detail::to_ucoeff(c, RationalSeries(sp, 0), a_cap, "[0]"));
            continue;
        }
        const RationalSeries s = detail::solve_i_series(c, m, k, a_cap);
        law.k_series.emplace(k, detail::to_ucoeff(c, s, a_cap, "[" + std::to_string(k) + "]"));
    }
    return law;
}

inline ReducedLaw build_reduced_law(const ChromaticConfig& c) {
    return build_reduced_law(c, default_a_cap(c), static_cast<int>(c.p_pow(c.n + 1)) + static_cast<int>(c.p) + 2);
}

}  // namespace fgld
