#include "psmatch/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "psmatch/link.hpp"
#include "psmatch/simulation.hpp"
#include "psmatch/stats.hpp"

namespace psmatch {

std::vector<int> brute_force_match(const std::vector<double>& scores,
                                   const std::vector<int>& w, int i, int m) {
    if (scores.size() != w.size())
        throw ShapeError("brute_force_match: scores and treatment lengths differ");
    const int n = static_cast<int>(scores.size());
    if (i < 0 || i >= n)
        throw BoundError("brute_force_match: unit index out of range");
    std::vector<std::pair<double, int>> cand;
    for (int j = 0; j < n; ++j)
        if (w[static_cast<std::size_t>(j)] == 1 - w[static_cast<std::size_t>(i)])
            cand.emplace_back(std::abs(scores[static_cast<std::size_t>(i)] -
                                       scores[static_cast<std::size_t>(j)]),
                              j);
    if (m < 1 || static_cast<std::size_t>(m) > cand.size())
        throw BoundError("brute_force_match: match count out of range for the arm");
    std::sort(cand.begin(), cand.end());
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(m));
    for (int t = 0; t < m; ++t) out.push_back(cand[static_cast<std::size_t>(t)].second);
    std::sort(out.begin(), out.end());
    return out;
}

double brute_force_ate(const Dataset& ds, const std::vector<double>& scores, int m) {
    double acc = 0.0;
    for (int i = 0; i < ds.n(); ++i) {
        double mean = 0.0;
        for (int j : brute_force_match(scores, ds.w(), i, m)) mean += ds.y(j);
        mean /= m;
        acc += (2.0 * ds.w(i) - 1.0) * (ds.y(i) - mean);
    }
    return acc / ds.n();
}

BoundResult efficiency_bound(int design_id, BoundMethod method) {
    const DesignSpec spec = design_by_id(design_id);
    const double a = spec.y1.bx1 - spec.y0.bx1;
    const double b = spec.y1.bx2 - spec.y0.bx2;
    const double s2noise = spec.noise_sd * spec.noise_sd;

    BoundResult res;
    if (method == BoundMethod::ClosedForm) {
        // Var of the effect surface over the unit box: uniform covariates
        // have variance 1/12 and the intercepts drop out.
        const double surface_var = (a * a + b * b) / 12.0;
        // E[1/p + 1/(1-p)] for the logistic assignment: the integrand is
        // 2 + 2 cosh(theta'x), and E exp(theta_j x_j) = 2 sinh(theta_j/2)
        // / theta_j on [-1/2, 1/2], multiplying over coordinates.
        double prod = 1.0;
        for (Eigen::Index j = 0; j < spec.theta_star.size(); ++j) {
            const double t = spec.theta_star(j);
            prod *= t == 0.0 ? 1.0 : 2.0 * std::sinh(t / 2.0) / t;
        }
        res.sigma2_eff = surface_var + s2noise * (2.0 + 2.0 * prod);
        res.method = "closed-form";
    } else {
        // Tensor quadrature integrates the inverse-probability weights
        // directly, with no hyperbolic reduction shared with the branch
        // above.
        const auto nodes = gauss_legendre(64, -0.5, 0.5);
        const auto& link = logistic_link();
        const auto surface = [&](double x1, double x2) {
            return (spec.y1.intercept - spec.y0.intercept) + a * x1 + b * x2;
        };
        KahanSum tau_acc;
        for (const auto& nx : nodes)
            for (const auto& ny : nodes)
                tau_acc.add(nx.weight * ny.weight * surface(nx.x, ny.x));
        const double tau = tau_acc.value();

        KahanSum total;
        for (const auto& nx : nodes) {
            for (const auto& ny : nodes) {
                const double w = nx.weight * ny.weight;
                const double diff = surface(nx.x, ny.x) - tau;
                const double p = link.cdf(spec.theta_star(0) * nx.x +
                                          spec.theta_star(1) * ny.x);
                total.add(w * (diff * diff + s2noise * (1.0 / p + 1.0 / (1.0 - p))));
            }
        }
        res.sigma2_eff = total.value();
        res.method = "quadrature";
    }
    res.sigma_eff = std::sqrt(res.sigma2_eff);
    return res;
}

} // namespace psmatch
