#pragma once

// The verification pipeline behind `fgld verify`, and its JSON report.

#include <chrono>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "checks.hpp"
#include "descent.hpp"
#include "dvr.hpp"
#include "fgl.hpp"
#include "isogeny.hpp"
#include "reduced_law.hpp"

namespace fgld {

using Json = nlohmann::ordered_json;

struct VerifyOptions {
    unsigned p = 2;
    int n = 1;
    std::optional<int> x_deg;
    int u_prec = 32;
    std::uint64_t seed = 7;
    int random_traces = 100;
    int max_weight = 20;
};

/// Terms in the dense high-degree tables; the cost driver of a run.
inline long estimated_cost(unsigned p, int n, int u_prec) {
    const long d = ipow(p, n + 1) - ipow(p, n);
    const long a_cap = (u_prec + 3) * d + ipow(p, n);
    const long rows = ipow(p, n + 1) + p + 3;
    return a_cap * u_prec * rows;
}
inline constexpr long kDeskScaleLimit = 250000;

struct RunReport {
    Json config;
    CheckList checks;
    std::optional<int> epsilon_sign;
    Json descent_traces = Json::array();
    Json sections = Json::object();
    Json timing = Json::object();

    Json to_json() const;
};

inline Json check_json(const Check& c) {
    Json j;
    j["name"] = c.name;
    j["status"] = std::string(to_string(c.status));
    j["detail"] = c.detail;
    if (c.defect) j["defect"] = *c.defect;
    return j;
}

inline Json RunReport::to_json() const {
    Json j;
    j["config"] = config;
    j["checks"] = Json::array();
    for (const auto& c : checks.checks) j["checks"].push_back(check_json(c));
    j["epsilon_sign"] = epsilon_sign ? Json(*epsilon_sign) : Json(nullptr);
    j["descent_traces"] = descent_traces;
    for (const auto& [k, v] : sections.items()) j[k] = v;
    j["timing"] = timing;
    return j;
}

inline Json weight_json(const WeightValue& w) { return w.str(); }

inline Json trace_json(const DescentTrace& t) {
    Json j;
    j["z"] = t.steps.empty() ? t.terminal.render() : t.steps.front().z.render();
    j["steps"] = Json::array();
    for (const auto& s : t.steps) {
        Json step;
        step["weight"] = weight_json(s.weight);
        step["chosen_index"] = s.chosen_index;
        step["extracted"] = s.extracted.render();
        step["extracted_weight"] = weight_json(weight_of(s.extracted));
        j["steps"].push_back(step);
    }
    j["terminal"] = t.terminal.render();
    j["valid"] = trace_is_valid(t);
    return j;
}

/// A valuation-based check; flagged when the value sits within d of the horizon.
inline Check valuation_check(const std::string& name, const DvrElement& e, long expected, const std::string& what) {
    const auto v = e.valuation();
    Check c{name, CheckStatus::Pass, what + " = " + std::to_string(expected), std::nullopt};
    if (!v || *v != expected) {
        c.status = CheckStatus::Fail;
        c.defect = "valuation " + (v ? std::to_string(*v) : std::string("inf")) + ": " + e.render();
    } else if (*v >= e.horizon() - e.degree_bound()) {
        c.status = CheckStatus::HorizonFlagged;
    }
    return c;
}

inline Check weight_check(const std::string& name, const DvrElement& e, long num, long den, const std::string& what) {
    const WeightValue w = e.weight();
    const WeightValue expect{num, den};
    Check c{name, w == expect ? CheckStatus::Pass : CheckStatus::Fail, what + " = " + w.str(), std::nullopt};
    if (!(w == expect)) c.defect = "expected " + expect.str() + ", got " + w.str();
    return c;
}

/// Random z = u^w * (unit) with 1 <= w <= max_weight.
inline USeries random_z(std::mt19937_64& rng, unsigned p, int prec, int max_weight) {
    const int w = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_weight));
    USeries z(p, prec);
    z.set(w, 1 + static_cast<long>(rng() % (p - 1)));
    for (int t = w + 1; t < prec; ++t) z.set(t, static_cast<long>(rng() % p));
    return z;
}

namespace detail {

class StageTimer {
public:
    explicit StageTimer(Json& sink) : sink_(sink) {}
    void lap(const std::string& stage) {
        const auto now = std::chrono::steady_clock::now();
        sink_[stage + "_ms"] = std::chrono::duration<double, std::milli>(now - last_).count();
        last_ = now;
    }

private:
    Json& sink_;
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

inline void record_error(CheckList& checks, const std::string& stage, const Error& e) {
    checks.checks.push_back({stage + "_error", CheckStatus::Fail, std::string(to_string(e.kind())), e.what()});
}

/// Agreement of the dense high-degree tables with the low-degree reduction of F.
inline Check law_consistency_check(const ReducedLaw& law, const ReducedFgl& red) {
    const int M = law.config.u_precision;
    const auto mismatch = [&](const ModPSeries& s, auto&& dense_at) -> std::optional<std::string> {
        for (const auto& t : s.terms()) {
            if (t.udeg >= M) continue;
            const auto e = s.space()->unpack(t.mono);
            if (auto got = dense_at(e, t.udeg); got && *got != t.coeff.residue()) {
                std::string where = "exponents";
                for (int x : e) where += " " + std::to_string(x);
                return where + " differ";
            }
        }
        return std::nullopt;
    };
    auto bad = mismatch(red.addition, [&](const std::vector<int>& e, int ud) -> std::optional<std::uint32_t> {
        if (e[0] > law.x_rows || e[1] > law.a_cap) return std::nullopt;
        return law.rows[static_cast<std::size_t>(e[0])][e[1]][ud];
    });
    if (!bad)
        bad = mismatch(red.p_series, [&](const std::vector<int>& e, int ud) -> std::optional<std::uint32_t> {
            if (e[0] > law.a_cap) return std::nullopt;
            return law.series(static_cast<long>(law.config.p))[e[0]][ud];
        });
    // Terms present in the dense tables but missing from the reduction.
    if (!bad) {
        const int D = law.config.formal_cap;
        for (int j = 0; j <= law.x_rows && !bad; ++j)
            for (int m = 0; j + m <= D && m <= law.a_cap && !bad; ++m)
                for (int ud = 0; ud < M; ++ud) {
                    const auto c = law.rows[static_cast<std::size_t>(j)][m][ud];
                    if (c == 0) continue;
                    std::vector<int> e{j, m, ud};
                    if (red.addition.coefficient(std::span<const int>(e)).residue() != c) {
                        bad = "row " + std::to_string(j) + " y^" + std::to_string(m) + " u^" + std::to_string(ud);
                        break;
                    }
                }
    }
    return {"reduced_law_consistency", bad ? CheckStatus::Fail : CheckStatus::Pass,
            "high-degree tables agree with F mod (p, u_1..u_{n-1}) to total degree " + std::to_string(law.config.formal_cap),
            bad};
}

}  // namespace detail

inline RunReport run_verify(const VerifyOptions& opt) {
    RunReport rep;
    const ChromaticConfig cfg = ChromaticConfig::make(opt.p, opt.n, opt.x_deg, opt.u_prec);
    const int d = cfg.d();
    const long pn = cfg.p_pow(cfg.n);
    const int iso_cap = static_cast<int>(cfg.p_pow(cfg.n + 1)) + static_cast<int>(cfg.p) + 2;
    rep.config = {{"p", cfg.p},
                  {"n", cfg.n},
                  {"x_deg", cfg.formal_cap},
                  {"u_prec", cfg.u_precision},
                  {"d", d},
                  {"a_cap", default_a_cap(cfg)},
                  {"isogeny_x_cap", iso_cap},
                  {"seed", opt.seed}};
    rep.sections["seed"] = opt.seed;
    CheckList& out = rep.checks;
    detail::StageTimer timer(rep.timing);

    // Formal group law and its congruences.
    std::optional<FormalGroupLaw> F;
    try {
        F = build_fgl(cfg);
        out.append(verify_fgl_axioms(*F));
        out.append(verify_fgl_congruences(*F));
    } catch (const Error& e) {
        detail::record_error(out, "fgl", e);
        return rep;
    }
    timer.lap("fgl");

    // Reduction, preparation and the DVR.
    std::optional<ReducedLaw> law;
    std::optional<WeierstrassFactorization> wf;
    std::optional<DvrRing> R;
    std::optional<PsiResult> psi;
    try {
        const ReducedFgl red = reduce_to_un(*F);
        {
            std::vector<int> e{static_cast<int>(pn), 1};
            bool ok = red.p_series.coefficient(std::span<const int>(e)).residue() == 1;
            for (const auto& t : red.p_series.terms()) {
                const int deg = red.a_space->exponent(t.mono, 0);
                if (deg < pn || (deg == pn && t.udeg != 1)) ok = false;
            }
            out.add("reduced_pseries_leading", ok, "[p](a) = u_n a^{p^n} mod a^{p^n+1}", red.p_series.render());
            const ModPSeries mod_u = red.p_series.set_to_zero({cfg.top_u()}).drop_above_formal_degree(static_cast<int>(cfg.p_pow(cfg.n + 1)));
            std::vector<int> top{static_cast<int>(cfg.p_pow(cfg.n + 1)), 0};
            const ModPSeries expect = ModPSeries::monomial(red.a_space, top, PrimeFieldElement(1, cfg.p));
            out.add("reduced_pseries_mod_u", mod_u == expect, "[p](a) = a^{p^{n+1}} mod (u_n, a^{p^{n+1}+1})",
                    (mod_u - expect).render());
        }
        law = build_reduced_law(cfg);
        timer.lap("reduced_law");
        out.checks.push_back(detail::law_consistency_check(*law, red));

        wf = weierstrass_prepare(law->series(static_cast<long>(cfg.p)), static_cast<int>(pn), d);
        out.checks.push_back(weierstrass_reconstruction_check(*wf, law->series(static_cast<long>(cfg.p))));
        const DistinguishedPoly& g = wf->distinguished;
        out.add("g_monic_degree", g.degree() == d && g[d] == USeries::constant(cfg.p, cfg.u_precision, 1),
                "g monic of degree d = " + std::to_string(d), g.render());
        bool mod_u_ok = true;
        for (int i = 0; i < d; ++i) mod_u_ok = mod_u_ok && g[i][0] == 0;
        out.add("g_mod_u", mod_u_ok, "g = a^" + std::to_string(d) + " mod u_n", g.render());
        out.add("g_constant_valuation", g[0].weight() == std::optional<int>(1), "constant term of g has u_n-valuation 1",
                g[0].render());
        out.add("unit_part_is_unit", wf->unit_part[0].is_unit(), "U(0) is a unit of F_p[[u_n]]", wf->unit_part[0].render());
        const auto again = weierstrass_prepare(law->series(static_cast<long>(cfg.p)), static_cast<int>(pn), d);
        out.add("weierstrass_deterministic", again.distinguished == g, "rerunning the preparation reproduces g");
        out.add("eisenstein", eisenstein_check(g), "g is Eisenstein over F_p[[u_n]]", g.render());
        rep.sections["dvr"] = {{"g", g.render()}, {"a_cap", law->a_cap}};
        timer.lap("weierstrass");

        R.emplace(g);
        out.checks.push_back(valuation_check("val_u", R->u(), d, "val(u_n)"));
        out.checks.push_back(valuation_check("val_a", R->a(), 1, "val(a)"));
        out.checks.push_back(weight_check("wt_u", R->u(), 1, 1, "wt(u_n)"));
        out.checks.push_back(weight_check("wt_a", R->a(), 1, d, "wt(a)"));
        psi = compute_psi(*law, *R);
        out.add("psi_nonzero", !psi->psi.is_zero(), "Psi != 0 in R");
        out.checks.push_back(valuation_check("val_psi", psi->psi, static_cast<long>(cfg.p) - 1, "val(Psi)"));
        out.checks.push_back(weight_check("wt_psi", psi->psi, static_cast<long>(cfg.p) - 1, d, "wt(Psi)"));
        out.add("psi_remark", psi->psi == psi->psi_negative, "prod [-i](a) = prod [i](a)",
                (psi->psi - psi->psi_negative).render());
        rep.sections["dvr"]["psi"] = psi->psi.render();
        timer.lap("dvr");
    } catch (const Error& e) {
        detail::record_error(out, "dvr", e);
        return rep;
    }

    // Isogeny: [p]_{F'}, nbar(u_n), the sign.
    std::optional<DvrElement> nbar;
    try {
        const NormCoordinate nc = norm_coordinate(*law, *R, iso_cap);
        const RSeries lhs = isogeny_lhs(*law, *R, iso_cap);
        out.add("norm_f0", nc.f[0].is_zero(), "f(0) = 0");
        out.checks.push_back(valuation_check("norm_linear_valuation", nc.f[1], static_cast<long>(cfg.p) - 1,
                                             "val(linear coefficient of f)"));
        const QuotientPSeries q = quotient_p_series(*R, nc, lhs, iso_cap, false);
        Json coeffs = Json::array();
        std::string non_integral;
        for (int m = 1; m <= iso_cap; ++m) {
            const FracElement& c = q.coefficients[static_cast<std::size_t>(m)];
            coeffs.push_back({{"degree", m},
                              {"integral", static_cast<bool>(q.integral[static_cast<std::size_t>(m)])},
                              {"shift", c.shift()},
                              {"value", c.render()}});
            if (!q.integral[static_cast<std::size_t>(m)]) non_integral += " y^" + std::to_string(m);
        }
        out.add("quotient_integrality", q.all_integral(),
                "every coefficient of [p]_{F'} up to y^" + std::to_string(iso_cap) + " lies in R",
                "non-integral:" + non_integral);
        if (!q.all_integral()) throw Error(ErrorKind::IntegralityFailure, "[p]_{F'} is not integral");
        out.checks.push_back(quotient_residual_check(*R, q, nc, lhs));

        Json vanishing = Json::array();
        std::vector<long> degrees{1};
        for (int i = 1; i < cfg.n; ++i) degrees.push_back(cfg.p_pow(i));
        for (long deg : degrees) {
            const DvrElement c = q.coefficients[static_cast<std::size_t>(deg)].integral_value(*R, "y^" + std::to_string(deg));
            vanishing.push_back({{"degree", deg}, {"zero", c.is_zero()}, {"precision", c.precision()}});
            out.add("vanishing_y" + std::to_string(deg), c.is_zero(),
                    "coefficient of y^" + std::to_string(deg) + " of [p]_{F'} is 0 in R", c.render());
        }
        nbar = extract_nbar_un(*R, q, cfg.p, cfg.n);
        const DvrElement nbar2 = nbar_by_division(*R, psi->psi, cfg.p, cfg.n);
        const int prec = std::min(nbar->precision(), nbar2.precision());
        const bool agree = nbar->truncated(prec) == nbar2.truncated(prec);
        out.add("nbar_routes_agree", agree, "extracted nbar(u_n) = u_n / Psi^{p^n-1} mod u^" + std::to_string(prec),
                "extracted " + nbar->render() + "; divided " + nbar2.render());
        const DvrElement pf = R->mul(*nbar, R->pow(psi->psi, pn - 1));
        const DvrElement pf_defect = pf - R->u().truncated(pf.precision());
        out.add("pformula", pf_defect.is_zero(), "nbar(u_n) Psi^{p^n-1} = u_n mod u^" + std::to_string(pf.precision()),
                pf_defect.render());
        out.checks.push_back(weight_check("wt_nbar", *nbar, static_cast<long>(cfg.p) - 1, d, "wt(nbar(u_n))"));

        const SignResult s1 = mainpfact_sign_check(*R, *nbar, psi->psi, cfg.p, cfg.n);
        const SignResult s2 = mainpfact_sign_check(*R, nbar2, psi->psi, cfg.p, cfg.n);
        rep.epsilon_sign = s1.epsilon;
        std::string detail = "nbar(u_n) Psi^{p^n} = eps u_n Psi with eps = " + std::string(s1.epsilon > 0 ? "+1" : "-1");
        if (s1.plus_holds && s1.minus_holds) detail += " (both signs agree in characteristic 2)";
        out.add("mainpfact_sign", s1.epsilon == s2.epsilon, detail + "; both routes agree",
                "extracted route " + std::to_string(s1.epsilon) + ", division route " + std::to_string(s2.epsilon));
        rep.sections["isogeny"] = {{"coefficients", coeffs},
                                   {"vanishing", vanishing},
                                   {"nbar_un", nbar->render()},
                                   {"epsilon", s1.epsilon},
                                   {"plus_holds", s1.plus_holds},
                                   {"minus_holds", s1.minus_holds},
                                   {"route_agreement", agree}};
        timer.lap("isogeny");
    } catch (const Error& e) {
        detail::record_error(out, "isogeny", e);
        return rep;
    }

    // Descent.
    try {
        const NbarMap N(*R, *nbar);
        const int M = cfg.u_precision;
        const USeries one = USeries::constant(cfg.p, M, 1);
        out.add("nbar_maps_one", N(one) == R->one().truncated(N(one).precision()), "nbar(1) = 1");
        std::mt19937_64 rng(opt.seed);
        int hom_fail = 0, pairs = 20, min_rule_fail = 0, additive_holds = 0;
        for (int k = 0; k < pairs; ++k) {
            const USeries z1 = random_z(rng, cfg.p, M, opt.max_weight), z2 = random_z(rng, cfg.p, M, opt.max_weight);
            const DvrElement prod = N(z1 * z2), sum = N(z1 + z2);
            const DvrElement n1 = N(z1), n2 = N(z2);
            const int pm = std::min(prod.precision(), std::min(n1.precision(), n2.precision()));
            if (!(prod.truncated(pm) == R->mul(n1, n2).truncated(pm))) ++hom_fail;
            const int ps = std::min(sum.precision(), std::min(n1.precision(), n2.precision()));
            if (!(sum.truncated(ps) == (n1 + n2).truncated(ps))) ++hom_fail;
            const int w1 = *z1.weight(), w2 = *z2.weight();
            if (w1 != w2) {
                const auto ws = (z1 + z2).weight();
                if (!ws || *ws != std::min(w1, w2)) ++min_rule_fail;
                if (ws && *ws == w1 + w2) ++additive_holds;
            }
        }
        out.add("apply_nbar_homomorphism", hom_fail == 0,
                "nbar(z1 z2) = nbar(z1) nbar(z2) and nbar(z1 + z2) = nbar(z1) + nbar(z2) on " + std::to_string(pairs) +
                    " random pairs",
                std::to_string(hom_fail) + " failures");
        out.add("weight_min_rule", min_rule_fail == 0,
                "wt(z1 + z2) = min(wt z1, wt z2) when the weights differ; the additive reading held for " +
                    std::to_string(additive_holds) + " of the pairs",
                std::to_string(min_rule_fail) + " failures");

        const DescentTrace tu = descent_run(USeries::monomial(cfg.p, M, 1), N, d);
        out.add("descent_un", tu.steps.size() == 1 && trace_is_valid(tu),
                "z = u_n reaches a unit in one step (" + std::to_string(tu.steps.size()) + " taken)");
        rep.descent_traces.push_back(trace_json(tu));

        int bad = 0, max_steps = 0;
        std::string first_bad;
        for (int k = 0; k < opt.random_traces; ++k) {
            const USeries z = random_z(rng, cfg.p, M, opt.max_weight);
            try {
                const DescentTrace t = descent_run(z, N, d);
                const bool ok = trace_is_valid(t) && static_cast<long>(t.steps.size()) <= static_cast<long>(*z.weight()) * d;
                if (!ok && first_bad.empty()) first_bad = z.render();
                bad += ok ? 0 : 1;
                max_steps = std::max(max_steps, static_cast<int>(t.steps.size()));
                rep.descent_traces.push_back(trace_json(t));
            } catch (const Error& e) {
                if (first_bad.empty()) first_bad = z.render() + ": " + e.what();
                ++bad;
            }
        }
        out.add("descent_random", bad == 0,
                std::to_string(opt.random_traces) + " random z with 1 <= wt(z) <= " + std::to_string(opt.max_weight) +
                    " descend to a unit with strictly decreasing weight within wt(z) d steps (longest " +
                    std::to_string(max_steps) + ")",
                first_bad);
        timer.lap("descent");
    } catch (const Error& e) {
        detail::record_error(out, "descent", e);
    }
    return rep;
}

/// The pipeline up to nbar(u_n), without the checks.
struct NbarContext {
    ChromaticConfig config;
    ReducedLaw law;
    std::unique_ptr<DvrRing> ring;
    DvrElement psi;
    DvrElement nbar;
};

inline NbarContext build_nbar_context(const ChromaticConfig& cfg) {
    NbarContext ctx{cfg, build_reduced_law(cfg), nullptr, {}, {}};
    const auto wf = weierstrass_prepare(ctx.law.series(static_cast<long>(cfg.p)), static_cast<int>(cfg.p_pow(cfg.n)), cfg.d());
    ctx.ring = std::make_unique<DvrRing>(wf.distinguished);
    ctx.psi = compute_psi(ctx.law, *ctx.ring).psi;
    const int iso_cap = static_cast<int>(cfg.p_pow(cfg.n + 1)) + static_cast<int>(cfg.p) + 2;
    const NormCoordinate nc = norm_coordinate(ctx.law, *ctx.ring, iso_cap);
    const QuotientPSeries q = quotient_p_series(*ctx.ring, nc, isogeny_lhs(ctx.law, *ctx.ring, iso_cap), iso_cap);
    ctx.nbar = extract_nbar_un(*ctx.ring, q, cfg.p, cfg.n);
    return ctx;
}

struct DescentOptions {
    unsigned p = 2;
    int n = 1;
    int u_prec = 32;
    std::optional<std::string> z;
    int random = 0;
    int max_weight = 20;
    std::uint64_t seed = 7;
};

inline RunReport run_descent(const DescentOptions& opt) {
    RunReport rep;
    const ChromaticConfig cfg = ChromaticConfig::make(opt.p, opt.n, std::nullopt, opt.u_prec);
    if (opt.max_weight < 1 || opt.max_weight >= cfg.u_precision)
        throw Error(ErrorKind::InvalidConfig, "max weight must lie in [1, u-precision)");
    std::optional<USeries> explicit_z;
    if (opt.z) explicit_z = parse_useries(*opt.z, cfg.p, cfg.u_precision);
    rep.config = {{"p", cfg.p}, {"n", cfg.n}, {"u_prec", cfg.u_precision}, {"d", cfg.d()}, {"seed", opt.seed}};
    rep.sections["seed"] = opt.seed;
    detail::StageTimer timer(rep.timing);
    const NbarContext ctx = build_nbar_context(cfg);
    const NbarMap N(*ctx.ring, ctx.nbar);
    timer.lap("setup");

    const auto run_one = [&](const USeries& z) -> std::optional<std::string> {
        try {
            const DescentTrace t = descent_run(z, N, cfg.d());
            rep.descent_traces.push_back(trace_json(t));
            const auto w = z.weight();
            if (!trace_is_valid(t) || (w && static_cast<long>(t.steps.size()) > std::max(0L, static_cast<long>(*w) * cfg.d())))
                return "invalid trace from " + z.render();
            return std::nullopt;
        } catch (const Error& e) {
            return z.render() + ": " + e.what();
        }
    };
    if (explicit_z) {
        const auto bad = run_one(*explicit_z);
        const std::size_t steps = bad ? 0 : rep.descent_traces.back()["steps"].size();
        rep.checks.add("descent_z", !bad, "z = " + explicit_z->render() + " reaches a unit in " + std::to_string(steps) + " steps",
                       bad);
    }
    if (opt.random > 0) {
        std::mt19937_64 rng(opt.seed);
        int failures = 0;
        std::optional<std::string> first;
        for (int k = 0; k < opt.random; ++k) {
            if (auto bad = run_one(random_z(rng, cfg.p, cfg.u_precision, opt.max_weight))) {
                ++failures;
                if (!first) first = bad;
            }
        }
        rep.checks.add("descent_random", failures == 0,
                       std::to_string(opt.random) + " random z with 1 <= wt(z) <= " + std::to_string(opt.max_weight) +
                           " descend to a unit with strictly decreasing weight",
                       first);
    }
    timer.lap("descent");
    return rep;
}

struct PSeriesOptions {
    unsigned p = 2;
    int n = 1;
    std::optional<int> x_deg;
    std::optional<long> i_max;
};

inline RunReport run_pseries(const PSeriesOptions& opt) {
    RunReport rep;
    const ChromaticConfig cfg = ChromaticConfig::make(opt.p, opt.n, opt.x_deg, std::nullopt);
    const long i_max = opt.i_max.value_or(static_cast<long>(cfg.p) * cfg.p + 1);
    if (i_max < 0) throw Error(ErrorKind::InvalidConfig, "i-max must be non-negative");
    rep.config = {{"p", cfg.p}, {"n", cfg.n}, {"x_deg", cfg.formal_cap}, {"i_max", i_max}};
    detail::StageTimer timer(rep.timing);
    const FormalGroupLaw F = build_fgl(cfg);
    Json table = Json::array();
    for (const auto& row : pseries_table(F, i_max)) {
        table.push_back({{"i", row.i},
                         {"k", row.k <= cfg.n ? Json(row.k) : Json("top")},
                         {"residue", row.residue.render()},
                         {"expected", row.expected.render()},
                         {"match", row.matches()}});
        rep.checks.add(row.name(cfg.n), row.matches(), "residue " + row.residue.render(),
                       (row.residue - row.expected).render());
    }
    rep.sections["pseries"] = table;
    timer.lap("pseries");
    return rep;
}

}  // namespace fgld
