#include "psmatch/propensity.hpp"

#include <cmath>

#include "psmatch/errors.hpp"
#include "psmatch/stats.hpp"

namespace psmatch {

namespace {

void check_theta(const Dataset& ds, const Eigen::VectorXd& theta) {
    if (theta.size() != ds.k())
        throw ShapeError("theta length must equal the number of covariates");
    if (!theta.allFinite())
        throw DomainError("theta must be finite");
}

// LDLT with an explicit conditioning check; Eigen's info() alone does not
// flag rank deficiency reliably.
Eigen::LDLT<Eigen::MatrixXd> checked_ldlt(const Eigen::MatrixXd& m, const char* what) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
    const auto& d = ldlt.vectorD();
    const double dmax = d.maxCoeff();
    const double dmin = d.minCoeff();
    if (ldlt.info() != Eigen::Success || !(dmax > 0.0) || !(dmin > dmax * 1e-12))
        throw RankDeficiencyError(what);
    return ldlt;
}

} // namespace

double log_likelihood(const Dataset& ds, const Eigen::VectorXd& theta,
                      const LinkFunction& link) {
    check_theta(ds, theta);
    const Eigen::VectorXd t = ds.x() * theta;
    KahanSum acc;
    for (int i = 0; i < ds.n(); ++i)
        acc.add(ds.w(i) == 1 ? link.log_cdf(t(i)) : link.log_ccdf(t(i)));
    return acc.value();
}

Eigen::VectorXd score_gradient(const Dataset& ds, const Eigen::VectorXd& theta,
                               const LinkFunction& link) {
    check_theta(ds, theta);
    const Eigen::VectorXd t = ds.x() * theta;
    Eigen::VectorXd u(ds.n());
    for (int i = 0; i < ds.n(); ++i)
        u(i) = link.score_weight(t(i), ds.w(i));
    return ds.x().transpose() * u;
}

Eigen::MatrixXd fisher_information(const Dataset& ds, const Eigen::VectorXd& theta,
                                   const LinkFunction& link) {
    check_theta(ds, theta);
    const Eigen::VectorXd t = ds.x() * theta;
    Eigen::VectorXd v(ds.n());
    for (int i = 0; i < ds.n(); ++i)
        v(i) = link.info_weight(t(i));
    return (ds.x().transpose() * v.asDiagonal() * ds.x()) / static_cast<double>(ds.n());
}

PropensityFit fit_mle(const Dataset& ds, const MleOptions& opts, const LinkFunction& link) {
    if (opts.tolerance <= 0.0 || opts.max_iterations < 1)
        throw DomainError("fit_mle: bad options");

    Eigen::VectorXd theta = Eigen::VectorXd::Zero(ds.k());
    double ll = log_likelihood(ds, theta, link);
    Eigen::VectorXd g = score_gradient(ds, theta, link);

    int iter = 0;
    while (g.lpNorm<Eigen::Infinity>() > opts.tolerance && iter < opts.max_iterations) {
        const Eigen::MatrixXd info = fisher_information(ds, theta, link);
        const auto ldlt = checked_ldlt(info, "fit_mle: information matrix is singular "
                                             "(collinear or constant covariates)");
        const Eigen::VectorXd dir = ldlt.solve(g / static_cast<double>(ds.n()));

        // damped Newton: halve until the likelihood stops decreasing
        double step = 1.0;
        Eigen::VectorXd cand;
        double cll;
        for (;;) {
            cand = theta + step * dir;
            cll = log_likelihood(ds, cand, link);
            if (cll >= ll - 1e-12 * (1.0 + std::abs(ll)) || step <= 1e-10) break;
            step *= 0.5;
        }
        theta = cand;
        ll = cll;
        ++iter;
        if (theta.lpNorm<Eigen::Infinity>() > opts.divergence_norm)
            throw SeparationError("fit_mle: estimates diverged; the arms are perfectly "
                                  "separated and no finite maximizer exists");
        g = score_gradient(ds, theta, link);
    }

    PropensityFit fit;
    fit.theta_hat = theta;
    fit.loglik = ll;
    fit.fisher_info = fisher_information(ds, theta, link);
    fit.converged = g.lpNorm<Eigen::Infinity>() <= opts.tolerance;
    fit.iterations = iter;

    // On separable data the gradient decays along the divergent path, so the
    // tolerance can be met at a finite iterate before the norm guard fires.
    // The scale-free signature is a perfectly classified sample: the average
    // log-likelihood sits at zero, which no interior maximizer can reach.
    if (fit.converged && ll / static_cast<double>(ds.n()) > -1e-8)
        throw SeparationError("fit_mle: perfect classification; the arms are "
                              "separable and no finite maximizer exists");
    return fit;
}

std::vector<double> propensity_scores(const Dataset& ds, const Eigen::VectorXd& theta,
                                      const LinkFunction& link) {
    check_theta(ds, theta);
    const Eigen::VectorXd t = ds.x() * theta;
    std::vector<double> s(static_cast<std::size_t>(ds.n()));
    for (int i = 0; i < ds.n(); ++i)
        s[static_cast<std::size_t>(i)] = link.cdf(t(i));
    return s;
}

Eigen::VectorXd discretize(const Eigen::VectorXd& theta_hat, double d, int n) {
    if (!(d > 0.0) || !std::isfinite(d))
        throw DomainError("discretize: step d must be positive and finite");
    if (n < 1)
        throw DomainError("discretize: n must be at least 1");
    const double root = std::sqrt(static_cast<double>(n));
    Eigen::VectorXd out(theta_hat.size());
    for (Eigen::Index j = 0; j < theta_hat.size(); ++j)
        out(j) = (d / root) * std::round(root * theta_hat(j) / d);
    return out;
}

} // namespace psmatch
