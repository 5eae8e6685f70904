#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "psmatch/dataset.hpp"
#include "psmatch/estimator.hpp"
#include "psmatch/link.hpp"
#include "psmatch/matching.hpp"

namespace psmatch {

// Window sizes for the variance estimator. Zero means "derive from n":
// m becomes default_match_count(n) capped at min(n0, n1), q the nearest
// integer to n^(1/3) and l the constant 4, both clamped to [2, min(n0, n1)].
// Explicit nonzero values outside those ranges are refused.
struct TuningRule {
    int m = 0;
    int q = 0;
    int l = 0;
    double alpha = 0.05;

    struct Resolved {
        int m, q, l;
        double alpha;
    };
    Resolved resolved(const Dataset& ds) const;
};

struct VarianceComponents {
    double sigma2_hat = 0.0;    // raw asymptotic variance estimate
    Eigen::VectorXd c_hat;      // score-adjustment vector
    Eigen::MatrixXd info_hat;   // averaged information matrix
    double adjusted = 0.0;      // sigma2_hat - c' I^{-1} c, floored at >= 0
    bool floored = false;       // true when the subtraction went negative
    int m_used = 0, q_used = 0, l_used = 0;
};

// Sample variance of the outcomes over the q-nearest own-arm window
// H_q(i) (self included), divisor q-1. Requires 2 <= q <= own arm size.
double cond_variance_hat(const ScoreIndex& idx, const Eigen::VectorXd& y, int i, int q);

enum class CovSide {
    OwnArm,     // window H_l(i): estimates the regression of y on x at w_i
    OppositeArm // window J_l(i): same at 1 - w_i
};

// Componentwise sample covariance between x and y over the chosen l-unit
// window, divisor l-1. Requires 2 <= l <= relevant arm size.
Eigen::VectorXd cond_cov_hat(const ScoreIndex& idx, const Eigen::MatrixXd& x,
                             const Eigen::VectorXd& y, int i, int l, CovSide side);

// Raw variance estimate: mean squared centered matched contrast plus the
// reuse-count weighted conditional-variance term
//   (1/n) sum_i [ (K_i/m)^2 + (2m-1)/m * K_i/m ] * cond_variance_hat(i, q).
double sigma2_hat(const Dataset& ds, const ScoreIndex& idx, int m, int q);

// Score-adjustment vector: (1/n) sum_i dens(x_i'theta) times the two window
// covariances, each divided by the fitted score of the arm it estimates
// (treated side by p_i, control side by 1-p_i).
Eigen::VectorXd c_hat(const Dataset& ds, const ScoreIndex& idx,
                      const Eigen::VectorXd& theta_hat, int l,
                      const LinkFunction& link = logistic_link());

// adjusted = sigma2 - c' info^{-1} c, floored at 1e-12 * sigma2 (with a
// stderr warning) if the subtraction is negative. Throws
// RankDeficiencyError when info cannot be solved against.
VarianceComponents adjusted_variance(double sigma2, const Eigen::VectorXd& c,
                                     const Eigen::MatrixXd& info,
                                     int m_used, int q_used, int l_used);

// Two-sided normal interval tau_hat +- z_{1-alpha/2} sqrt(adjusted / n).
std::pair<double, double> confidence_interval(double tau_hat, double adjusted,
                                              int n, double alpha);

// Full pipeline at a resolved tuning: sigma2_hat, c_hat, information,
// adjustment. theta_hat must be the vector the scores in idx came from.
VarianceComponents estimate_variance(const Dataset& ds, const ScoreIndex& idx,
                                     const Eigen::VectorXd& theta_hat,
                                     const TuningRule& tuning,
                                     const LinkFunction& link = logistic_link());

} // namespace psmatch
