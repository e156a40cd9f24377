// fgld: verification and descent experiments for the chromatic formal group law.
//
//   fgld verify  --p 2 --n 1 [--x-deg D] [--u-prec M] [--check NAME] [--format json|text]
//   fgld descent --p 2 --n 1 (--z EXPR | --random N --max-weight W --seed S)
//   fgld pseries --p 2 --n 1 [--i-max I]
//
// Exit status: 0 when every check passes, 1 when a check fails, 2 on usage errors.

#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fgld/report.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

void print_text(const fgld::RunReport& rep, std::ostream& os) {
    os << "config " << rep.config.dump() << "\n";
    for (const auto& c : rep.checks.checks) {
        os << to_string(c.status) << "  " << c.name << "  " << c.detail << "\n";
        if (c.defect) os << "      defect: " << *c.defect << "\n";
    }
    if (rep.epsilon_sign) os << "epsilon_sign " << (*rep.epsilon_sign > 0 ? "+1" : "-1") << "\n";
    if (!rep.descent_traces.empty()) os << "descent traces: " << rep.descent_traces.size() << "\n";
    os << (rep.checks.all_passed() ? "all checks passed" : "some checks FAILED") << "\n";
}

int emit(const fgld::RunReport& rep, const std::string& format, const std::string& output) {
    std::ofstream file;
    if (!output.empty()) {
        file.open(output);
        if (!file) {
            std::cerr << "cannot write " << output << "\n";
            return kExitUsage;
        }
    }
    std::ostream& os = output.empty() ? std::cout : file;
    if (format == "json")
        os << rep.to_json().dump(2) << "\n";
    else
        print_text(rep, os);
    return rep.checks.all_passed() ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact verification of the height n+1 formal group law computations"};
    app.require_subcommand(1);
    std::string format = "text", output;

    fgld::VerifyOptions vopt;
    bool force = false;
    std::vector<std::string> only;
    auto* verify = app.add_subcommand("verify", "Run the full verification pipeline");
    verify->add_option("--p", vopt.p, "Prime")->required();
    verify->add_option("--n", vopt.n, "Height minus one")->required();
    verify->add_option("--x-deg", vopt.x_deg, "Total-degree cap for F (default p^{n+1}+2)");
    verify->add_option("--u-prec", vopt.u_prec, "u_n-adic precision M")->capture_default_str();
    verify->add_option("--seed", vopt.seed, "Seed for the random property runs")->capture_default_str();
    verify->add_option("--check", only, "Report only the named checks");
    verify->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "text"}));
    verify->add_option("-o,--output", output, "Write the report to a file");
    verify->add_flag("--force", force, "Run configurations above the desk-scale guard");

    fgld::DescentOptions dopt;
    auto* descent = app.add_subcommand("descent", "Run weight descent from given or random z");
    descent->add_option("--p", dopt.p, "Prime")->capture_default_str();
    descent->add_option("--n", dopt.n, "Height minus one")->capture_default_str();
    descent->add_option("--u-prec", dopt.u_prec, "u_n-adic precision M")->capture_default_str();
    auto* zopt = descent->add_option("--z", dopt.z, "Series in u: '2*u^3 + u^5' or a coefficient list '0,1,1'");
    auto* ropt = descent->add_option("--random", dopt.random, "Number of random z");
    descent->add_option("--max-weight", dopt.max_weight, "Largest weight of a random z")->capture_default_str();
    descent->add_option("--seed", dopt.seed, "Seed")->capture_default_str();
    descent->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "text"}));
    descent->add_option("-o,--output", output, "Write the report to a file");
    zopt->excludes(ropt);

    fgld::PSeriesOptions popt;
    auto* pseries = app.add_subcommand("pseries", "Tabulate i-series residues against the congruences");
    pseries->add_option("--p", popt.p, "Prime")->required();
    pseries->add_option("--n", popt.n, "Height minus one")->required();
    pseries->add_option("--x-deg", popt.x_deg, "Total-degree cap (default p^{n+1}+2)");
    pseries->add_option("--i-max", popt.i_max, "Largest i (default p^2+1)");
    pseries->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "text"}));
    pseries->add_option("-o,--output", output, "Write the report to a file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (*verify) {
            fgld::ChromaticConfig::make(vopt.p, vopt.n, vopt.x_deg, vopt.u_prec);
            const long cost = fgld::estimated_cost(vopt.p, vopt.n, vopt.u_prec);
            if (cost > fgld::kDeskScaleLimit && !force) {
                std::cerr << "refusing p=" << vopt.p << " n=" << vopt.n << ": estimated " << cost
                          << " dense terms exceeds the desk-scale limit " << fgld::kDeskScaleLimit
                          << " (pass --force to run anyway)\n";
                return kExitUsage;
            }
            fgld::RunReport rep = fgld::run_verify(vopt);
            if (!only.empty()) {
                const std::set<std::string> wanted(only.begin(), only.end());
                fgld::CheckList kept;
                for (const auto& c : rep.checks.checks)
                    if (wanted.count(c.name) || c.name.ends_with("_error")) kept.checks.push_back(c);
                for (const auto& name : wanted)
                    if (!rep.checks.find(name)) {
                        std::cerr << "unknown check '" << name << "'\n";
                        return kExitUsage;
                    }
                rep.checks = kept;
            }
            return emit(rep, format, output);
        }
        if (*descent) {
            if (!dopt.z && dopt.random <= 0) {
                std::cerr << "descent needs --z or --random\n" << descent->help();
                return kExitUsage;
            }
            return emit(fgld::run_descent(dopt), format, output);
        }
        return emit(fgld::run_pseries(popt), format, output);
    } catch (const fgld::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        const bool usage = e.kind() == fgld::ErrorKind::InvalidConfig || e.kind() == fgld::ErrorKind::ParseError;
        return usage ? kExitUsage : kExitFail;
    }
}
