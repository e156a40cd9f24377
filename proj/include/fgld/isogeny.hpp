#pragma once

// The quotient by the subgroup generated by a: the norm coordinate
// f(x) = prod_k (x -_F [k]a) over R and the series [p]_{F'} determined by
//   prod_k ([p](x) -_F [k]a) = [p]_{F'}(f(x)).
// Its y^{p^n} coefficient is the image of u_n under the total power operation.

#include <string>
#include <vector>

#include "checks.hpp"
#include "dvr.hpp"

namespace fgld {

/// numerator * a^{-shift}; an element of the fraction field of R.
class FracElement {
public:
    FracElement() = default;
    FracElement(DvrElement numerator, long shift) : num_(std::move(numerator)), shift_(shift) {}

    const DvrElement& numerator() const { return num_; }
    long shift() const { return shift_; }
    bool is_integral() const { return shift_ == 0; }

    /// Removes common powers of a: afterwards shift = 0 or val(numerator) = 0.
    /// A numerator that vanishes to its precision counts as divisible.
    FracElement normalized(const DvrRing& R) const {
        if (shift_ == 0) return *this;
        const auto v = num_.valuation();
        const long k = v ? std::min(*v, shift_) : shift_;
        return {R.divide_by_a_power(num_, k), shift_ - k};
    }

    /// The element of R, or IntegralityFailure.
    DvrElement integral_value(const DvrRing& R, const std::string& what) const {
        const FracElement n = normalized(R);
        if (!n.is_integral())
            throw Error(ErrorKind::IntegralityFailure, what + " has a pole of order " + std::to_string(n.shift_) + " in a");
        return n.num_;
    }

    static FracElement add(const DvrRing& R, const FracElement& x, const FracElement& y) {
        if (x.shift_ < y.shift_) return add(R, y, x);
        DvrElement lifted = y.num_;
        for (long k = y.shift_; k < x.shift_; ++k) lifted = R.mul_by_a(lifted);
        return {x.num_ + lifted, x.shift_};
    }
    static FracElement mul(const DvrRing& R, const FracElement& x, const FracElement& y) {
        return {R.mul(x.num_, y.num_), x.shift_ + y.shift_};
    }

    /// Equality after cross-normalisation, at the common precision.
    static bool equal(const DvrRing& R, const FracElement& x, const FracElement& y) {
        const FracElement a = x.normalized(R), b = y.normalized(R);
        if (a.shift_ != b.shift_) return false;
        const int prec = std::min(a.num_.precision(), b.num_.precision());
        return a.num_.truncated(prec) == b.num_.truncated(prec);
    }

    std::string render() const {
        if (shift_ == 0) return num_.render();
        return "(" + num_.render() + ")*a^-" + std::to_string(shift_);
    }

private:
    DvrElement num_;
    long shift_ = 0;
};

/// sum_m c_m x^m over R, truncated after x^{size-1}.
using RSeries = std::vector<DvrElement>;

namespace detail {

inline RSeries rseries_mul(const DvrRing& R, const RSeries& x, const RSeries& y, int len) {
    RSeries r(static_cast<std::size_t>(len), R.zero());
    for (int i = 0; i < len && i < static_cast<int>(x.size()); ++i) {
        if (x[static_cast<std::size_t>(i)].is_zero()) continue;
        for (int j = 0; i + j < len && j < static_cast<int>(y.size()); ++j) {
            if (y[static_cast<std::size_t>(j)].is_zero()) continue;
            auto& slot = r[static_cast<std::size_t>(i + j)];
            slot = slot + R.mul(x[static_cast<std::size_t>(i)], y[static_cast<std::size_t>(j)]);
        }
    }
    return r;
}

/// Evaluates several y-series at the same b, sharing the powers of b.
inline std::vector<DvrElement> evaluate_all(const DvrRing& R, const std::vector<UCoeffSeries>& series, const DvrElement& b) {
    const auto vb = b.valuation();
    if (vb && *vb == 0) throw Error(ErrorKind::NonUnitConstantTerm, "series evaluated at a unit does not converge");
    const int prec = std::min(R.precision(), b.precision());
    const long top = vb ? (static_cast<long>(prec) * R.d() + *vb - 1) / *vb - 1 : 0;
    std::vector<DvrElement> powers{R.one(prec)};
    for (long m = 1; m <= top; ++m) powers.push_back(R.mul(powers.back(), b));
    std::vector<DvrElement> out;
    for (const auto& s : series) {
        if (top > s.degree_cap())
            throw Error(ErrorKind::PrecisionExhausted, "series known to degree " + std::to_string(s.degree_cap()) +
                                                           ", evaluation needs " + std::to_string(top));
        std::vector<USeries> acc(static_cast<std::size_t>(R.d()), USeries::zero(R.prime(), prec));
        for (long m = 0; m <= top; ++m) {
            const USeries c = s[static_cast<int>(m)].truncated(prec);
            if (c.is_zero()) continue;
            for (int i = 0; i < R.d(); ++i) acc[static_cast<std::size_t>(i)] += c * powers[static_cast<std::size_t>(m)][i];
        }
        out.emplace_back(std::move(acc));
    }
    return out;
}

/// y-series divided by y (the series must have no constant term).
inline UCoeffSeries divided_by_y(const UCoeffSeries& s) {
    UCoeffSeries r;
    r.coeffs.assign(s.coeffs.begin() + 1, s.coeffs.end());
    return r;
}

}  // namespace detail

/// The norm coordinate f(x) up to x^{x_cap}, with the linear coefficient
/// factored as a^{p-1} * linear_unit.
struct NormCoordinate {
    RSeries f;
    DvrElement linear_unit;
};

/// F(x, b) = sum_j x^j F_j(b) as a series in x over R.
inline RSeries addition_at(const ReducedLaw& law, const DvrRing& R, const DvrElement& b, int x_cap) {
    std::vector<UCoeffSeries> rows(law.rows.begin(), law.rows.begin() + std::min(x_cap, law.x_rows) + 1);
    RSeries out = detail::evaluate_all(R, rows, b);
    out.resize(static_cast<std::size_t>(x_cap) + 1, R.zero());
    return out;
}

inline NormCoordinate norm_coordinate(const ReducedLaw& law, const DvrRing& R, int x_cap) {
    const int len = x_cap + 1;
    const DvrElement a = R.a();
    NormCoordinate out{RSeries(static_cast<std::size_t>(len), R.zero()), R.one()};
    out.f[1] = R.one();
    for (long k = 1; k < static_cast<long>(law.config.p); ++k) {
        const DvrElement b = R.evaluate(law.series(-k), a);
        out.f = detail::rseries_mul(R, out.f, addition_at(law, R, b, x_cap), len);
        out.linear_unit = R.mul(out.linear_unit, R.evaluate(detail::divided_by_y(law.series(-k)), a));
    }
    return out;
}

/// prod_k F([p](x), [-k]a) up to x^{x_cap}.
inline RSeries isogeny_lhs(const ReducedLaw& law, const DvrRing& R, int x_cap) {
    const int len = x_cap + 1;
    const UCoeffSeries& ps = law.series(static_cast<long>(law.config.p));
    RSeries p_of_x(static_cast<std::size_t>(len), R.zero());
    for (int m = 0; m < len && m <= ps.degree_cap(); ++m) p_of_x[static_cast<std::size_t>(m)] = R.from_constant(ps[m]);

    RSeries out = p_of_x;
    const DvrElement a = R.a();
    for (long k = 1; k < static_cast<long>(law.config.p); ++k) {
        const RSeries rows = addition_at(law, R, R.evaluate(law.series(-k), a), x_cap);
        // sum_j F_j(b) [p](x)^j; [p](x)^j has order j p^n.
        RSeries composed(static_cast<std::size_t>(len), R.zero());
        RSeries power(static_cast<std::size_t>(len), R.zero());
        power[0] = R.one();
        for (int j = 0; j < len; ++j) {
            bool any = false;
            for (int m = 0; m < len; ++m) {
                if (power[static_cast<std::size_t>(m)].is_zero()) continue;
                any = true;
                composed[static_cast<std::size_t>(m)] =
                    composed[static_cast<std::size_t>(m)] + R.mul(rows[static_cast<std::size_t>(j)], power[static_cast<std::size_t>(m)]);
            }
            if (!any) break;
            power = detail::rseries_mul(R, power, p_of_x, len);
        }
        out = detail::rseries_mul(R, out, composed, len);
    }
    return out;
}

struct QuotientPSeries {
    std::vector<FracElement> coefficients;  ///< normalised, index = y-degree
    std::vector<bool> integral;

    bool all_integral() const {
        return std::all_of(integral.begin(), integral.end(), [](bool b) { return b; });
    }
};

/// [p]_{F'}(y) = LHS(f^{-1}(y)), with f^{-1} computed over Frac(R). Denominators
/// are kept as a-powers and normalised only at the end.
inline QuotientPSeries quotient_p_series(const DvrRing& R, const NormCoordinate& nc, const RSeries& lhs, int y_cap,
                                         bool strict = true) {
    const unsigned p = R.prime();
    const DvrElement inv_unit = R.unit_inverse(nc.linear_unit);
    const auto frac = [](const DvrElement& e) { return FracElement(e, 0); };
    // powers[k][m] = [y^m] r(y)^k for the reversion r of f.
    std::vector<std::vector<FracElement>> powers(static_cast<std::size_t>(y_cap) + 1,
                                                 std::vector<FracElement>(static_cast<std::size_t>(y_cap) + 1,
                                                                          frac(R.zero())));
    QuotientPSeries out;
    out.coefficients.assign(static_cast<std::size_t>(y_cap) + 1, frac(R.zero()));
    out.integral.assign(static_cast<std::size_t>(y_cap) + 1, true);
    for (int m = 1; m <= y_cap; ++m) {
        FracElement acc = frac(R.zero());
        for (int k = 2; k <= m; ++k) {
            FracElement pk = frac(R.zero());
            for (int j = 1; j <= m - k + 1; ++j)
                pk = FracElement::add(R, pk, FracElement::mul(R, powers[1][static_cast<std::size_t>(j)],
                                                              powers[static_cast<std::size_t>(k) - 1][static_cast<std::size_t>(m - j)]));
            powers[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)] = pk;
            if (k < static_cast<int>(nc.f.size()))
                acc = FracElement::add(R, acc, FracElement::mul(R, frac(nc.f[static_cast<std::size_t>(k)]), pk));
        }
        // r_1 = 1/f_1; r_m = -(1/f_1) sum_{k>=2} f_k [y^m] r^k.
        DvrElement numer = m == 1 ? inv_unit : R.mul(-acc.numerator(), inv_unit);
        powers[1][static_cast<std::size_t>(m)] = FracElement(numer, (m == 1 ? 0 : acc.shift()) + static_cast<long>(p) - 1);

        FracElement q = frac(R.zero());
        for (int k = 1; k <= m && k < static_cast<int>(lhs.size()); ++k) {
            if (lhs[static_cast<std::size_t>(k)].is_zero()) continue;
            q = FracElement::add(R, q, FracElement::mul(R, frac(lhs[static_cast<std::size_t>(k)]),
                                                        powers[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)]));
        }
        out.coefficients[static_cast<std::size_t>(m)] = q.normalized(R);
        out.integral[static_cast<std::size_t>(m)] = out.coefficients[static_cast<std::size_t>(m)].is_integral();
        if (strict && !out.integral[static_cast<std::size_t>(m)])
            throw Error(ErrorKind::IntegralityFailure,
                        "coefficient of y^" + std::to_string(m) + " of [p]_{F'} is " + out.coefficients[static_cast<std::size_t>(m)].render());
    }
    return out;
}

/// Back-substitution: sum_m q_m f(x)^m against the LHS below x^{size}.
inline Check quotient_residual_check(const DvrRing& R, const QuotientPSeries& q, const NormCoordinate& nc, const RSeries& lhs) {
    const int len = static_cast<int>(lhs.size());
    RSeries total(static_cast<std::size_t>(len), R.zero());
    RSeries power(static_cast<std::size_t>(len), R.zero());
    power[0] = R.one();
    for (int m = 1; m < len && m < static_cast<int>(q.coefficients.size()); ++m) {
        power = detail::rseries_mul(R, power, nc.f, len);
        const DvrElement qm = q.coefficients[static_cast<std::size_t>(m)].integral_value(R, "coefficient of y^" + std::to_string(m));
        for (int i = 0; i < len; ++i)
            total[static_cast<std::size_t>(i)] = total[static_cast<std::size_t>(i)] + R.mul(qm, power[static_cast<std::size_t>(i)]);
    }
    int prec = R.precision();
    for (const auto& t : total) prec = std::min(prec, t.precision());
    std::optional<std::string> defect;
    for (int i = 0; i < len; ++i) {
        const DvrElement diff = (total[static_cast<std::size_t>(i)] - lhs[static_cast<std::size_t>(i)]).truncated(prec);
        if (!diff.is_zero()) {
            defect = "x^" + std::to_string(i) + ": " + diff.render();
            break;
        }
    }
    return {"isogeny_residual", defect ? CheckStatus::Fail : CheckStatus::Pass,
            "prod_k([p](x) -_F [k]a) = [p]_{F'}(f(x)) below x^" + std::to_string(len) + " mod u^" + std::to_string(prec),
            defect};
}

/// The y^{p^n} coefficient of [p]_{F'}, after checking that the coefficients
/// of y and y^{p^i} (1 <= i < n) vanish.
inline DvrElement extract_nbar_un(const DvrRing& R, const QuotientPSeries& q, unsigned p, int n) {
    const auto coefficient = [&](long deg) {
        if (deg >= static_cast<long>(q.coefficients.size()))
            throw Error(ErrorKind::IndexOutOfRange, "y-cap below y^" + std::to_string(deg));
        return q.coefficients[static_cast<std::size_t>(deg)].integral_value(R, "coefficient of y^" + std::to_string(deg));
    };
    for (int i = 0; i < n; ++i) {
        const long deg = ipow(p, i);
        const DvrElement c = coefficient(deg);
        if (!c.is_zero())
            throw Error(ErrorKind::PrerequisiteVanishingFailed,
                        "coefficient of y^" + std::to_string(deg) + " is " + c.render() + ", expected 0");
    }
    return coefficient(ipow(p, n));
}

/// u_n / Psi^{p^n - 1} by exact division in R.
inline DvrElement nbar_by_division(const DvrRing& R, const DvrElement& psi, unsigned p, int n) {
    const DvrElement denom = R.pow(psi, ipow(p, n) - 1);
    const auto v = denom.valuation();
    if (!v) throw Error(ErrorKind::InexactDivision, "Psi^{p^n-1} vanishes to precision");
    if (*v > R.d()) throw Error(ErrorKind::InexactDivision, "val(Psi^{p^n-1}) = " + std::to_string(*v) + " exceeds val(u_n)");
    const DvrElement unit = R.divide_by_a_power(denom, *v);
    const DvrElement u = R.u().truncated(unit.precision());
    return R.divide_by_a_power(R.mul(u, R.unit_inverse(unit)), *v);
}

/// The sign eps with nbar * Psi^{p^n} = eps * u_n * Psi. At p = 2 both signs
/// coincide and +1 is reported.
struct SignResult {
    int epsilon = 0;
    bool plus_holds = false;
    bool minus_holds = false;
    std::string defect;
};

inline SignResult mainpfact_sign_check(const DvrRing& R, const DvrElement& nbar, const DvrElement& psi, unsigned p, int n) {
    const DvrElement lhs = R.mul(nbar, R.pow(psi, ipow(p, n)));
    const DvrElement upsi = R.mul(R.u(), psi);
    const int prec = std::min(lhs.precision(), upsi.precision());
    SignResult s;
    s.plus_holds = (lhs - upsi).truncated(prec).is_zero();
    s.minus_holds = (lhs + upsi).truncated(prec).is_zero();
    if (s.plus_holds)
        s.epsilon = 1;
    else if (s.minus_holds)
        s.epsilon = -1;
    else {
        s.defect = (lhs - upsi).truncated(prec).render();
        throw Error(ErrorKind::NeitherSignHolds, "nbar*Psi^{p^n} - u*Psi = " + s.defect);
    }
    return s;
}

}  // namespace fgld
