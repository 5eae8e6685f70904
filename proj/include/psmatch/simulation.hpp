#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "psmatch/dataset.hpp"
#include "psmatch/rng.hpp"
#include "psmatch/variance.hpp"

namespace psmatch {

// A benchmark data-generating process: two uniform covariates on
// [-1/2, 1/2], logistic treatment assignment at theta_star, and linear
// outcome surfaces with unit-variance normal noise.
struct DesignSpec {
    struct OutcomeModel {
        double intercept;
        double bx1;
        double bx2;
    };
    int design_id = 0;
    Eigen::Vector2d theta_star{1.0, 2.0};
    OutcomeModel y0{0.0, 0.0, 0.0};
    OutcomeModel y1{0.0, 0.0, 0.0};
    double noise_sd = 1.0;
    double true_tau = 5.0;
};

// The two benchmark designs (1 and 2); anything else is a DomainError.
DesignSpec design_by_id(int id);

// A generated sample plus both potential outcomes (handy for diagnostics).
struct DesignSample {
    Dataset ds;
    std::vector<double> y0;
    std::vector<double> y1;
};

// Draws n units from the design. Per unit the stream is consumed in the
// fixed order x1, x2, treatment uniform, control noise, treated noise, so
// a given (seed, n) pair always yields the same sample.
DesignSample generate_design_sample(const DesignSpec& spec, int n, Rng& rng);
Dataset generate_design(const DesignSpec& spec, int n, Rng& rng);

// Estimate at one match count within one replication.
struct EstimateRecord {
    int m = 0;
    bool ok = false; // false: m exceeded an arm, or the fit failed upstream
    double tau_hat = 0.0;
    double adjusted = 0.0;
    double ci95_low = 0.0, ci95_high = 0.0;
    double ci90_low = 0.0, ci90_high = 0.0;
};

struct ReplicationResult {
    bool fit_ok = false; // propensity fit succeeded
    std::vector<EstimateRecord> records; // one per entry of the m grid
};

// One full replication: generate, fit, match, estimate, variance, CIs at
// 95% and 90%. Pure function of (spec, n, m_grid, tuning, seed).
ReplicationResult run_replication(const DesignSpec& spec, int n,
                                  const std::vector<int>& m_grid,
                                  const TuningRule& tuning, std::uint64_t seed);

struct MonteCarloConfig {
    int design_id = 1;
    std::vector<int> n_list;
    int reps = 2000;
    std::uint64_t base_seed = 1;
    TuningRule tuning; // tuning.m > 0 pins a single match count
    int threads = 0;   // 0 = hardware concurrency
};

struct MonteCarloRow {
    int n = 0;
    int m = 0;
    double rmse = 0.0;
    double mae = 0.0;
    double cover95 = 0.0;
    double cover90 = 0.0;
    double nsd = 0.0; // sqrt(n) times the sample SD of the estimates
    int failed = 0;   // replications skipped at this (n, m)
};

struct MonteCarloTable {
    std::vector<MonteCarloRow> rows;
    MonteCarloConfig config;

    std::string to_csv() const;  // config echo comment + header + rows
    std::string to_text() const; // aligned columns for terminals
};

// Replication r uses seed base_seed + r; replications are distributed over
// a worker pool and aggregated in index order, so the table is identical
// for every worker count.
MonteCarloTable run_monte_carlo(const MonteCarloConfig& config);

struct Metrics {
    double rmse = 0.0;
    double mae = 0.0;
    double cover95 = 0.0;
    double cover90 = 0.0;
    double nsd = 0.0;
};

// Aggregates per-replication results against the true effect. nsd is nan
// when fewer than two estimates are supplied (sample SD undefined).
Metrics metrics(const std::vector<double>& estimates,
                const std::vector<std::pair<double, double>>& ci95,
                const std::vector<std::pair<double, double>>& ci90,
                double true_tau, int n);

// Match-count grid {2^j : 0 <= j <= floor(log2 n) / 2}.
std::vector<int> m_grid_for(int n);

} // namespace psmatch
