#include "psmatch/analyze.hpp"

#include <cstdio>

namespace psmatch {

EstimateReport analyze_dataset(const Dataset& ds, const TuningRule& tuning,
                               const LinkFunction& link) {
    EstimateReport rep;
    rep.fit = fit_mle(ds, {}, link);
    if (!rep.fit.converged)
        throw SeparationError("analyze_dataset: propensity fit did not converge "
                              "within the iteration budget");

    const auto scores = propensity_scores(ds, rep.fit.theta_hat, link);
    rep.validation = validate(ds, scores);
    const ScoreIndex idx(scores, ds.w());

    const auto r = tuning.resolved(ds); // refuses an explicit m beyond the smaller arm
    rep.ate.tau_hat = ate_matching(ds, idx, r.m);
    rep.components = estimate_variance(ds, idx, rep.fit.theta_hat, tuning, link);
    const auto ci = confidence_interval(rep.ate.tau_hat, rep.components.adjusted,
                                        ds.n(), r.alpha);
    rep.ate.m = r.m;
    rep.ate.n = ds.n();
    rep.ate.variance = rep.components.adjusted;
    rep.ate.ci_low = ci.first;
    rep.ate.ci_high = ci.second;
    return rep;
}

std::string EstimateReport::key_values() const {
    char buf[256];
    std::string out;
    std::snprintf(buf, sizeof buf, "n = %d\n", ate.n);
    out += buf;
    out += "theta_hat =";
    for (Eigen::Index j = 0; j < fit.theta_hat.size(); ++j) {
        std::snprintf(buf, sizeof buf, " %.10g", fit.theta_hat(j));
        out += buf;
    }
    out += "\n";
    std::snprintf(buf, sizeof buf, "loglik = %.10g\niterations = %d\n",
                  fit.loglik, fit.iterations);
    out += buf;
    out += validation.key_values();
    std::snprintf(buf, sizeof buf, "m = %d\nq = %d\nl = %d\n",
                  components.m_used, components.q_used, components.l_used);
    out += buf;
    std::snprintf(buf, sizeof buf, "tau_hat = %.10g\n", ate.tau_hat);
    out += buf;
    std::snprintf(buf, sizeof buf,
                  "sigma2_hat = %.10g\nadjusted_variance = %.10g\nfloored = %d\n",
                  components.sigma2_hat, components.adjusted, components.floored ? 1 : 0);
    out += buf;
    std::snprintf(buf, sizeof buf, "ci_low = %.10g\nci_high = %.10g\n",
                  ate.ci_low, ate.ci_high);
    out += buf;
    return out;
}

} // namespace psmatch
