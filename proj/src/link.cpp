#include "psmatch/link.hpp"

#include <cmath>

namespace psmatch {

namespace {

// log(1 + e^z) without overflow for large |z|
double softplus(double z) {
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double logistic_cdf(double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

double logistic_density(double t) {
    const double u = std::exp(-std::abs(t));
    const double s = 1.0 + u;
    return u / (s * s);
}

double logistic_log_cdf(double t) { return -softplus(-t); }
double logistic_log_ccdf(double t) { return -softplus(t); }

// (w - p) * density / (p (1-p)) collapses to w - p for the logistic link,
// which stays finite where the general ratio would be 0/0.
double logistic_score_weight(double t, int w) { return w - logistic_cdf(t); }

// density^2 / (p (1-p)) collapses to p (1-p) = density.
double logistic_info_weight(double t) { return logistic_density(t); }

} // namespace

const LinkFunction& logistic_link() {
    static const LinkFunction link{
        logistic_cdf,     logistic_density,
        logistic_log_cdf, logistic_log_ccdf,
        logistic_score_weight, logistic_info_weight,
        "logistic"};
    return link;
}

} // namespace psmatch
