#pragma once

#include <vector>

#include "psmatch/dataset.hpp"
#include "psmatch/matching.hpp"

namespace psmatch {

struct AteEstimate {
    double tau_hat = 0.0;
    int m = 0;
    int n = 0;
    double variance = 0.0; // adjusted large-sample variance, if computed
    double ci_low = 0.0;
    double ci_high = 0.0;
};

// One pass over all units at a fixed m: per-unit mean of matched outcomes
// and the reuse count K[i]. The variance machinery consumes the same match
// sets as the point estimator by construction.
struct MatchStats {
    std::vector<double> match_mean; // (1/m) sum of matched outcomes
    std::vector<int> k_count;       // how often unit i is used as a match
};

MatchStats compute_match_stats(const Dataset& ds, const ScoreIndex& idx, int m);

enum class CrossCheck {
    Warn, // report a mismatch on stderr, return the direct-form value
    Throw
};

// Matching estimate of the average treatment effect:
//   (1/n) sum_i (2w_i - 1) (y_i - match_mean_i).
// Also evaluated in the algebraically equal reuse-count form
//   (1/n) sum_i (2w_i - 1) (1 + K_i/m) y_i
// and cross-checked to 1e-10 relative. Requires 1 <= m <= min(n0, n1).
double ate_matching(const Dataset& ds, const ScoreIndex& idx, int m,
                    CrossCheck check = CrossCheck::Warn);

// Convenience overload building the index from raw scores.
double ate_matching(const Dataset& ds, const std::vector<double>& scores, int m,
                    CrossCheck check = CrossCheck::Warn);

// Largest power of two not exceeding sqrt(n). Requires n >= 1.
int default_match_count(int n);

} // namespace psmatch
