#include "psmatch/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "psmatch/link.hpp"
#include "psmatch/propensity.hpp"
#include "psmatch/stats.hpp"

namespace psmatch {

DesignSpec design_by_id(int id) {
    DesignSpec spec;
    spec.design_id = id;
    if (id == 1) {
        spec.y0 = {0.0, 3.0, -3.0};
        spec.y1 = {5.0, 5.0, 1.0};
    } else if (id == 2) {
        spec.y0 = {0.0, 2.0, 4.0};
        spec.y1 = {5.0, -1.0, -2.0};
    } else {
        throw DomainError("design_by_id: unknown design id " + std::to_string(id));
    }
    return spec;
}

DesignSample generate_design_sample(const DesignSpec& spec, int n, Rng& rng) {
    if (n < 2)
        throw DomainError("generate_design_sample: need n >= 2");
    const auto& link = logistic_link();
    Eigen::MatrixXd x(n, 2);
    std::vector<int> w(static_cast<std::size_t>(n));
    Eigen::VectorXd y(n);
    std::vector<double> y0(static_cast<std::size_t>(n)), y1(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        // fixed draw order per unit keeps (seed, n) -> sample reproducible
        const double x1 = rng.uniform_centered();
        const double x2 = rng.uniform_centered();
        const double uw = rng.uniform();
        const double u0 = rng.normal();
        const double u1 = rng.normal();
        const double p = link.cdf(spec.theta_star(0) * x1 + spec.theta_star(1) * x2);
        const int wi = uw < p ? 1 : 0;
        const double y0i = spec.y0.intercept + spec.y0.bx1 * x1 + spec.y0.bx2 * x2 +
                           spec.noise_sd * u0;
        const double y1i = spec.y1.intercept + spec.y1.bx1 * x1 + spec.y1.bx2 * x2 +
                           spec.noise_sd * u1;
        x(i, 0) = x1;
        x(i, 1) = x2;
        w[static_cast<std::size_t>(i)] = wi;
        y(i) = wi == 1 ? y1i : y0i;
        y0[static_cast<std::size_t>(i)] = y0i;
        y1[static_cast<std::size_t>(i)] = y1i;
    }
    return DesignSample{Dataset(std::move(x), std::move(w), std::move(y)),
                        std::move(y0), std::move(y1)};
}

Dataset generate_design(const DesignSpec& spec, int n, Rng& rng) {
    return generate_design_sample(spec, n, rng).ds;
}

ReplicationResult run_replication(const DesignSpec& spec, int n,
                                  const std::vector<int>& m_grid,
                                  const TuningRule& tuning, std::uint64_t seed) {
    ReplicationResult rr;
    rr.records.resize(m_grid.size());
    for (std::size_t g = 0; g < m_grid.size(); ++g) rr.records[g].m = m_grid[g];

    Rng rng(seed);
    try {
        const DesignSample sample = generate_design_sample(spec, n, rng);
        const Dataset& ds = sample.ds;
        const PropensityFit fit = fit_mle(ds);
        if (!fit.converged) return rr;
        const auto scores = propensity_scores(ds, fit.theta_hat);
        const ScoreIndex idx(scores, ds.w());
        rr.fit_ok = true;

        const int cap = std::min(ds.n0(), ds.n1());
        for (std::size_t g = 0; g < m_grid.size(); ++g) {
            EstimateRecord& rec = rr.records[g];
            if (rec.m < 1 || rec.m > cap) continue; // skipped, ok stays false
            TuningRule tr = tuning;
            tr.m = rec.m;
            const double tau = ate_matching(ds, idx, rec.m);
            const VarianceComponents vc = estimate_variance(ds, idx, fit.theta_hat, tr);
            const auto ci95 = confidence_interval(tau, vc.adjusted, n, 0.05);
            const auto ci90 = confidence_interval(tau, vc.adjusted, n, 0.10);
            rec.ok = true;
            rec.tau_hat = tau;
            rec.adjusted = vc.adjusted;
            rec.ci95_low = ci95.first;
            rec.ci95_high = ci95.second;
            rec.ci90_low = ci90.first;
            rec.ci90_high = ci90.second;
        }
    } catch (const Error&) {
        // degenerate draw or failed fit: the whole replication is skipped
        rr.fit_ok = false;
        for (auto& rec : rr.records) rec.ok = false;
    }
    return rr;
}

Metrics metrics(const std::vector<double>& estimates,
                const std::vector<std::pair<double, double>>& ci95,
                const std::vector<std::pair<double, double>>& ci90,
                double true_tau, int n) {
    const std::size_t r = estimates.size();
    if (r == 0)
        throw ShapeError("metrics: need at least one estimate");
    if (ci95.size() != r || ci90.size() != r)
        throw ShapeError("metrics: estimate and interval counts differ");

    KahanSum sq, ab, mean_acc;
    int hit95 = 0, hit90 = 0;
    for (std::size_t i = 0; i < r; ++i) {
        const double e = estimates[i] - true_tau;
        sq.add(e * e);
        ab.add(std::abs(e));
        mean_acc.add(estimates[i]);
        if (ci95[i].first <= true_tau && true_tau <= ci95[i].second) ++hit95;
        if (ci90[i].first <= true_tau && true_tau <= ci90[i].second) ++hit90;
    }
    Metrics mt;
    mt.rmse = std::sqrt(sq.value() / static_cast<double>(r));
    mt.mae = ab.value() / static_cast<double>(r);
    mt.cover95 = static_cast<double>(hit95) / static_cast<double>(r);
    mt.cover90 = static_cast<double>(hit90) / static_cast<double>(r);
    if (r < 2) {
        mt.nsd = std::nan("");
    } else {
        const double mean = mean_acc.value() / static_cast<double>(r);
        KahanSum ss;
        for (double est : estimates) ss.add((est - mean) * (est - mean));
        mt.nsd = std::sqrt(static_cast<double>(n)) *
                 std::sqrt(ss.value() / static_cast<double>(r - 1));
    }
    return mt;
}

std::vector<int> m_grid_for(int n) {
    if (n < 1)
        throw DomainError("m_grid_for: n must be positive");
    const int jmax = (std::bit_width(static_cast<unsigned>(n)) - 1) / 2;
    std::vector<int> grid;
    for (int j = 0; j <= jmax; ++j) grid.push_back(1 << j);
    return grid;
}

MonteCarloTable run_monte_carlo(const MonteCarloConfig& config) {
    const DesignSpec spec = design_by_id(config.design_id);
    if (config.reps < 1)
        throw DomainError("run_monte_carlo: reps must be positive");
    if (config.n_list.empty())
        throw DomainError("run_monte_carlo: n_list must not be empty");
    for (int n : config.n_list)
        if (n < 2) throw DomainError("run_monte_carlo: every n must be >= 2");

    MonteCarloTable table;
    table.config = config;

    int workers = config.threads;
    if (workers <= 0) {
        const unsigned hc = std::thread::hardware_concurrency();
        workers = hc == 0 ? 1 : static_cast<int>(hc);
    }

    for (int n : config.n_list) {
        const std::vector<int> grid =
            config.tuning.m > 0 ? std::vector<int>{config.tuning.m} : m_grid_for(n);
        std::vector<ReplicationResult> results(static_cast<std::size_t>(config.reps));

        const int pool = std::min(workers, config.reps);
        if (pool <= 1) {
            for (int r = 0; r < config.reps; ++r)
                results[static_cast<std::size_t>(r)] = run_replication(
                    spec, n, grid, config.tuning,
                    config.base_seed + static_cast<std::uint64_t>(r));
        } else {
            std::atomic<int> next{0};
            std::exception_ptr first_error;
            std::mutex error_mutex;
            auto worker = [&] {
                try {
                    for (;;) {
                        const int r = next.fetch_add(1);
                        if (r >= config.reps) return;
                        results[static_cast<std::size_t>(r)] = run_replication(
                            spec, n, grid, config.tuning,
                            config.base_seed + static_cast<std::uint64_t>(r));
                    }
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            };
            std::vector<std::thread> threads;
            threads.reserve(static_cast<std::size_t>(pool));
            for (int t = 0; t < pool; ++t) threads.emplace_back(worker);
            for (auto& th : threads) th.join();
            if (first_error) std::rethrow_exception(first_error);
        }

        // aggregate in replication order: the table is identical for every
        // worker count
        for (std::size_t g = 0; g < grid.size(); ++g) {
            std::vector<double> est;
            std::vector<std::pair<double, double>> c95, c90;
            est.reserve(static_cast<std::size_t>(config.reps));
            for (int r = 0; r < config.reps; ++r) {
                const ReplicationResult& rr = results[static_cast<std::size_t>(r)];
                const EstimateRecord& rec = rr.records[g];
                if (!rr.fit_ok || !rec.ok) continue;
                est.push_back(rec.tau_hat);
                c95.emplace_back(rec.ci95_low, rec.ci95_high);
                c90.emplace_back(rec.ci90_low, rec.ci90_high);
            }
            MonteCarloRow row;
            row.n = n;
            row.m = grid[g];
            row.failed = config.reps - static_cast<int>(est.size());
            if (!est.empty()) {
                const Metrics mt = metrics(est, c95, c90, spec.true_tau, n);
                row.rmse = mt.rmse;
                row.mae = mt.mae;
                row.cover95 = mt.cover95;
                row.cover90 = mt.cover90;
                row.nsd = mt.nsd;
            } else {
                row.rmse = row.mae = row.cover95 = row.cover90 = row.nsd = std::nan("");
            }
            table.rows.push_back(row);
        }
    }
    return table;
}

namespace {

std::string config_echo(const MonteCarloConfig& c) {
    std::string ns;
    for (std::size_t i = 0; i < c.n_list.size(); ++i) {
        if (i) ns += ";";
        ns += std::to_string(c.n_list[i]);
    }
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "design=%d n=%s reps=%d seed=%llu m=%s q=%s l=%s",
                  c.design_id, ns.c_str(), c.reps,
                  static_cast<unsigned long long>(c.base_seed),
                  c.tuning.m > 0 ? std::to_string(c.tuning.m).c_str() : "auto",
                  c.tuning.q > 0 ? std::to_string(c.tuning.q).c_str() : "auto",
                  c.tuning.l > 0 ? std::to_string(c.tuning.l).c_str() : "auto");
    return buf;
}

} // namespace

std::string MonteCarloTable::to_csv() const {
    std::string out = "# psmatch simulate " + config_echo(config) + "\n";
    out += "n,m,rmse,mae,cover95,cover90,nsd,failed\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%d,%.6f,%.6f,%.4f,%.4f,%.6f,%d\n",
                      r.n, r.m, r.rmse, r.mae, r.cover95, r.cover90, r.nsd, r.failed);
        out += buf;
    }
    return out;
}

std::string MonteCarloTable::to_text() const {
    char buf[256];
    std::snprintf(buf, sizeof buf, "design %d  reps %d  seed %llu\n",
                  config.design_id, config.reps,
                  static_cast<unsigned long long>(config.base_seed));
    std::string out = buf;
    std::snprintf(buf, sizeof buf, "%6s %5s %8s %8s %9s %9s %8s %7s\n",
                  "n", "m", "rmse", "mae", "cover95", "cover90", "nsd", "failed");
    out += buf;
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%6d %5d %8.4f %8.4f %9.4f %9.4f %8.4f %7d\n",
                      r.n, r.m, r.rmse, r.mae, r.cover95, r.cover90, r.nsd, r.failed);
        out += buf;
    }
    return out;
}

} // namespace psmatch
