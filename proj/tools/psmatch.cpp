#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "psmatch/analyze.hpp"
#include "psmatch/oracle.hpp"
#include "psmatch/simulation.hpp"
#include "psmatch/version.hpp"

namespace {

// exit codes: 0 ok, 2 I/O, 3 parse, 4 domain/bounds, 5 estimation failure,
// 70 internal; CLI11 handles flag errors itself
constexpr int kExitIo = 2;
constexpr int kExitParse = 3;
constexpr int kExitDomain = 4;
constexpr int kExitEstimation = 5;
constexpr int kExitInternal = 70;

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw psmatch::IoError("cannot open output file " + path);
    out << body;
    out.flush();
    if (!out)
        throw psmatch::IoError("failed while writing " + path);
}

int run_simulate(int design, const std::vector<int>& n_list, int reps,
                 std::uint64_t seed, int m, int q, int l, int threads,
                 const std::string& output, bool quiet) {
    psmatch::MonteCarloConfig cfg;
    cfg.design_id = design;
    cfg.n_list = n_list;
    cfg.reps = reps;
    cfg.base_seed = seed;
    cfg.tuning.m = m;
    cfg.tuning.q = q;
    cfg.tuning.l = l;
    cfg.threads = threads;
    const psmatch::MonteCarloTable table = psmatch::run_monte_carlo(cfg);
    write_file(output, table.to_csv());
    if (!quiet) {
        std::cout << table.to_text();
        std::cout << "wrote " << output << "\n";
    }
    return 0;
}

int run_estimate(const std::string& input, const psmatch::CsvLayout& layout,
                 int m, int q, int l, double alpha, const std::string& output) {
    const psmatch::Dataset ds = psmatch::load_dataset(input, layout);
    psmatch::TuningRule tuning;
    tuning.m = m;
    tuning.q = q;
    tuning.l = l;
    tuning.alpha = alpha;
    const psmatch::EstimateReport report = psmatch::analyze_dataset(ds, tuning);
    if (!report.validation.flagged.empty())
        std::cerr << report.validation.text();
    const std::string body = report.key_values();
    std::cout << body;
    if (!output.empty()) write_file(output, body);
    return 0;
}

int run_bound(int design) {
    const auto closed = psmatch::efficiency_bound(design, psmatch::BoundMethod::ClosedForm);
    const auto quad = psmatch::efficiency_bound(design, psmatch::BoundMethod::Quadrature);
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "design = %d\nsigma2_eff = %.10f\nsigma_eff = %.10f\n"
                  "sigma2_eff_quadrature = %.10f\nsigma_eff_quadrature = %.10f\n"
                  "method_delta = %.3e\n",
                  design, closed.sigma2_eff, closed.sigma_eff,
                  quad.sigma2_eff, quad.sigma_eff,
                  std::abs(closed.sigma_eff - quad.sigma_eff));
    std::cout << buf;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("psmatch ") + psmatch::kVersion +
                 " -- nearest-neighbor treatment-effect estimation on fitted scores"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read defaults from an ini/toml file");

    // simulate
    auto* sim = app.add_subcommand("simulate", "run a Monte Carlo benchmark table");
    int sim_design = 1;
    std::vector<int> sim_n;
    int sim_reps = 2000;
    std::uint64_t sim_seed = 1;
    int sim_m = 0, sim_q = 0, sim_l = 0, sim_threads = 0;
    std::string sim_output = "mc_table.csv";
    bool sim_quiet = false;
    sim->add_option("--design", sim_design, "design id (1 or 2)")
        ->check(CLI::IsMember({1, 2}));
    sim->add_option("--n", sim_n, "sample sizes (repeat or comma-separate)")
        ->required()
        ->delimiter(',');
    sim->add_option("--reps", sim_reps, "replications per sample size");
    sim->add_option("--seed", sim_seed, "base seed; replication r uses seed+r");
    sim->add_option("--m", sim_m, "fixed match count (default: power-of-two grid)");
    sim->add_option("--q", sim_q, "variance window size (default: cube-root rule)");
    sim->add_option("--l", sim_l, "covariance window size (default 4)");
    sim->add_option("--threads", sim_threads, "worker threads (default: all cores)");
    sim->add_option("--output", sim_output, "output CSV path");
    sim->add_flag("--quiet", sim_quiet, "suppress the text table on stdout");

    // estimate
    auto* est = app.add_subcommand("estimate", "estimate the effect from a CSV file");
    std::string est_input;
    psmatch::CsvLayout layout;
    int est_m = 0, est_q = 0, est_l = 0;
    double est_alpha = 0.05;
    std::string est_output;
    est->add_option("--input", est_input, "input CSV path")->required();
    est->add_option("--m", est_m, "match count (default: power-of-two rule)");
    est->add_option("--q", est_q, "variance window size (default: cube-root rule)");
    est->add_option("--l", est_l, "covariance window size (default 4)");
    est->add_option("--alpha", est_alpha, "two-sided interval level (default 0.05)");
    est->add_option("--output", est_output, "also write the report to this file");
    est->add_option("--outcome-column", layout.outcome, "outcome column name (default y)");
    est->add_option("--treatment-column", layout.treatment, "treatment column name (default w)");
    est->add_option("--covariate-prefix", layout.covariate_prefix,
                    "covariate column prefix (default x)");

    // bound
    auto* bnd = app.add_subcommand("bound", "print the design's efficiency bound");
    int bnd_design = 1;
    bnd->add_option("--design", bnd_design, "design id (1 or 2)")
        ->required()
        ->check(CLI::IsMember({1, 2}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (sim->parsed())
            return run_simulate(sim_design, sim_n, sim_reps, sim_seed, sim_m, sim_q,
                                sim_l, sim_threads, sim_output, sim_quiet);
        if (est->parsed())
            return run_estimate(est_input, layout, est_m, est_q, est_l, est_alpha,
                                est_output);
        if (bnd->parsed())
            return run_bound(bnd_design);
    } catch (const psmatch::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const psmatch::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const psmatch::SeparationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEstimation;
    } catch (const psmatch::RankDeficiencyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEstimation;
    } catch (const psmatch::Error& e) {
        // domain, degenerate-arm, bound, and shape problems land here
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}
