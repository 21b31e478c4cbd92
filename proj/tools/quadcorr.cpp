// quadcorr — correlation sums of class numbers and quadratic-form
// representation numbers vs their circle-method main terms.
//
//   quadcorr correlate --kind split --X 1000,10000 --l 0,1,12 --out report.csv
//   quadcorr verify [--filter gauss]
//   quadcorr fit-exponent --in report.csv

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "quadcorr/report.hpp"
#include "quadcorr/verify.hpp"

namespace {

qc::QuadForm parse_form(const std::string& s, int fallback_dim) {
    // "k:c11,c12,...,ckk" upper-triangular row-major; empty = sum of squares
    if (s.empty()) return qc::QuadForm::sum_of_squares(fallback_dim);
    auto colon = s.find(':');
    if (colon == std::string::npos) throw CLI::ValidationError("form", "expected k:coeffs");
    int dim = std::stoi(s.substr(0, colon));
    std::vector<qc::i64> coeffs;
    std::istringstream cs(s.substr(colon + 1));
    std::string tok;
    while (std::getline(cs, tok, ',')) coeffs.push_back(std::stoll(tok));
    return qc::QuadForm(dim, coeffs);
}

int cmd_correlate(const qc::ExperimentSpec& spec) {
    if (spec.out_path == "-") {
        qc::run_correlate(spec, std::cout);
        return 0;
    }
    std::ofstream out(spec.out_path, std::ios::trunc);
    if (!out) {
        std::cerr << "cannot open " << spec.out_path << "\n";
        return 2;
    }
    qc::run_correlate(spec, out);
    return 0;
}

int cmd_verify(const std::string& filter, int threads) {
    auto results = qc::run_verify(filter, threads);
    nlohmann::json j;
    bool all = !results.empty();
    for (const auto& r : results) {
        all = all && r.pass;
        j["suites"].push_back({{"name", r.name},
                               {"pass", r.pass},
                               {"checks", r.checks},
                               {"failures", r.failures},
                               {"note", r.note},
                               {"seconds", r.seconds}});
        std::cerr << (r.pass ? "PASS " : "FAIL ") << r.name << " (" << r.checks << " checks, "
                  << r.failures << " failures, " << r.seconds << "s)"
                  << (r.note.empty() ? "" : "  [" + r.note + "]") << "\n";
    }
    j["pass"] = all;
    std::cout << j.dump(2) << "\n";
    return all ? 0 : 1;
}

int cmd_fit(const std::string& in_path) {
    std::ifstream in(in_path);
    if (!in) {
        std::cerr << "cannot open " << in_path << "\n";
        return 2;
    }
    auto fits = qc::fit_exponent_csv(in);
    for (const auto& f : fits) {
        if (f.npoints < 4)
            std::cerr << "warning: shift=" << f.shift << " has only " << f.npoints
                      << " grid points (>= 4 recommended)\n";
        std::printf("shift=%lld slope=%.6f residual=%.6f npoints=%d\n", (long long)f.shift, f.slope,
                    f.residual, f.npoints);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"correlation sums of class numbers and representation numbers"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value config file; CLI flags override");

    qc::ExperimentSpec spec;
    std::string kind = "split", q1str, q2str, filter, fit_in;
    const char* env_cache = std::getenv("QUADCORR_CACHE");
    if (env_cache) spec.cache_dir = env_cache;
    spec.threads = int(std::max(1u, std::thread::hardware_concurrency()));
    int verify_threads = spec.threads;

    auto* cor = app.add_subcommand("correlate", "empirical sums vs predicted main terms");
    cor->add_option("--kind", kind, "split|nonsplit|r2|rq")->capture_default_str();
    cor->add_option("--X", spec.Xs, "window bounds, ascending")->required()->delimiter(',');
    cor->add_option("--l,--d", spec.shifts, "shift grid (l, or d for nonsplit)")
        ->required()
        ->delimiter(',');
    cor->add_option("--pmax", spec.pmax, "Euler product cutoff")->capture_default_str();
    cor->add_option("--Z", spec.Z, "q cutoff for exponential-sum checks")->capture_default_str();
    cor->add_option("--out", spec.out_path, "output CSV path, - for stdout")->capture_default_str();
    cor->add_option("--cache", spec.cache_dir, "cache directory")->envname("QUADCORR_CACHE");
    cor->add_option("--threads", spec.threads, "worker threads")->capture_default_str();
    cor->add_option("--q1", q1str, "form 1 as k:coeffs (rq kind)");
    cor->add_option("--q2", q2str, "form 2 as k:coeffs (rq kind)");

    auto* ver = app.add_subcommand("verify", "run consistency suites");
    ver->add_option("--filter", filter, "run only suites whose name contains this");
    ver->add_option("--threads", verify_threads, "worker threads")->capture_default_str();

    auto* fit = app.add_subcommand("fit-exponent", "error-exponent fit from a report CSV");
    fit->add_option("--in", fit_in, "input CSV")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cor->parsed()) {
            spec.kind = qc::ExperimentSpec::kind_from(kind);
            qc::QuadForm f1 = parse_form(q1str, spec.q1_dim), f2 = parse_form(q2str, spec.q2_dim);
            spec.q1_dim = f1.dim();
            spec.q1_coeffs = q1str.empty() ? std::vector<qc::i64>{} : f1.coeffs();
            spec.q2_dim = f2.dim();
            spec.q2_coeffs = q2str.empty() ? std::vector<qc::i64>{} : f2.coeffs();
            return cmd_correlate(spec);
        }
        if (ver->parsed()) return cmd_verify(filter, verify_threads);
        if (fit->parsed()) return cmd_fit(fit_in);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
