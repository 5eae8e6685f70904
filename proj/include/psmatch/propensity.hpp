#pragma once

#include <vector>

#include <Eigen/Dense>

#include "psmatch/dataset.hpp"
#include "psmatch/link.hpp"

namespace psmatch {

struct PropensityFit {
    Eigen::VectorXd theta_hat;
    double loglik = 0.0;
    Eigen::MatrixXd fisher_info; // averaged information at theta_hat
    bool converged = false;
    int iterations = 0;
};

struct MleOptions {
    double tolerance = 1e-10; // max-norm of the score vector
    int max_iterations = 100;
    double divergence_norm = 30.0; // ||theta||_inf beyond this => separation
};

// Bernoulli log-likelihood sum_i [w_i log p_i + (1-w_i) log(1-p_i)] with
// p_i = cdf(x_i' theta). Always finite thanks to the link's log forms.
double log_likelihood(const Dataset& ds, const Eigen::VectorXd& theta,
                      const LinkFunction& link = logistic_link());

// Gradient of log_likelihood in theta.
Eigen::VectorXd score_gradient(const Dataset& ds, const Eigen::VectorXd& theta,
                               const LinkFunction& link = logistic_link());

// Averaged information matrix (1/n) sum_i dens_i^2 / (p_i (1-p_i)) x_i x_i'.
// For the logistic link this equals minus the averaged Hessian.
Eigen::MatrixXd fisher_information(const Dataset& ds, const Eigen::VectorXd& theta,
                                   const LinkFunction& link = logistic_link());

// Newton-Raphson from theta = 0 with step halving. Throws SeparationError
// when iterates diverge (||theta||_inf > divergence_norm) or when the fit
// lands on a perfectly classified sample (average log-likelihood within
// 1e-8 of zero, where no finite maximizer exists), and RankDeficiencyError
// when the information matrix is singular. If the iteration budget runs
// out without divergence, returns converged = false.
PropensityFit fit_mle(const Dataset& ds, const MleOptions& opts = {},
                      const LinkFunction& link = logistic_link());

// Fitted scores p_i = cdf(x_i' theta), one per unit in dataset order.
std::vector<double> propensity_scores(const Dataset& ds, const Eigen::VectorXd& theta,
                                      const LinkFunction& link = logistic_link());

// Snaps each coordinate to the lattice (d/sqrt(n)) * Z, rounding half away
// from zero. Requires d > 0 and n >= 1.
Eigen::VectorXd discretize(const Eigen::VectorXd& theta_hat, double d, int n);

} // namespace psmatch
