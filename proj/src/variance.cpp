#include "psmatch/variance.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "psmatch/propensity.hpp"
#include "psmatch/stats.hpp"

namespace psmatch {

namespace {

// LDLT guarded against rank deficiency (see fit_mle for the same check).
Eigen::LDLT<Eigen::MatrixXd> checked_ldlt(const Eigen::MatrixXd& m, const char* what) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
    const auto& d = ldlt.vectorD();
    const double dmax = d.maxCoeff();
    const double dmin = d.minCoeff();
    if (ldlt.info() != Eigen::Success || !(dmax > 0.0) || !(dmin > dmax * 1e-12))
        throw RankDeficiencyError(what);
    return ldlt;
}

double window_variance(const Eigen::VectorXd& y, const std::vector<int>& window) {
    const double q = static_cast<double>(window.size());
    double mean = 0.0;
    for (int j : window) mean += y(j);
    mean /= q;
    double ss = 0.0;
    for (int j : window) ss += (y(j) - mean) * (y(j) - mean);
    return ss / (q - 1.0);
}

void window_covariance(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                       const std::vector<int>& window, Eigen::VectorXd& out) {
    const double l = static_cast<double>(window.size());
    const Eigen::Index k = x.cols();
    out.setZero(k);
    Eigen::VectorXd mx = Eigen::VectorXd::Zero(k);
    double my = 0.0;
    for (int j : window) {
        mx += x.row(j).transpose();
        my += y(j);
    }
    mx /= l;
    my /= l;
    for (int j : window)
        out += (x.row(j).transpose() - mx) * (y(j) - my);
    out /= l - 1.0;
}

} // namespace

TuningRule::Resolved TuningRule::resolved(const Dataset& ds) const {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw DomainError("tuning: alpha must lie in (0,1)");
    const int cap = std::min(ds.n0(), ds.n1());

    int mm = m;
    if (mm == 0) {
        mm = std::min(default_match_count(ds.n()), cap);
    } else if (mm < 1 || mm > cap) {
        throw BoundError("tuning: requested match count m exceeds the smaller arm; "
                         "pass m <= min(n0, n1)");
    }

    if (cap < 2)
        throw BoundError("tuning: variance windows need at least two units per arm");

    int qq = q;
    if (qq == 0)
        qq = std::clamp(static_cast<int>(std::lround(std::cbrt(static_cast<double>(ds.n())))),
                        2, cap);
    else if (qq < 2 || qq > cap)
        throw BoundError("tuning: window size q must lie in [2, min(n0, n1)]");

    int ll = l;
    if (ll == 0)
        ll = std::clamp(4, 2, cap);
    else if (ll < 2 || ll > cap)
        throw BoundError("tuning: window size l must lie in [2, min(n0, n1)]");

    return Resolved{mm, qq, ll, alpha};
}

double cond_variance_hat(const ScoreIndex& idx, const Eigen::VectorXd& y, int i, int q) {
    if (y.size() != idx.n())
        throw ShapeError("cond_variance_hat: one outcome per unit required");
    if (q < 2 || q > idx.arm_size(idx.arm_of(i)))
        throw BoundError("cond_variance_hat: window size q must lie in [2, arm size]");
    std::vector<int> window;
    match_same_into(idx, i, q, window);
    return window_variance(y, window);
}

Eigen::VectorXd cond_cov_hat(const ScoreIndex& idx, const Eigen::MatrixXd& x,
                             const Eigen::VectorXd& y, int i, int l, CovSide side) {
    if (y.size() != idx.n() || x.rows() != idx.n())
        throw ShapeError("cond_cov_hat: x and y must cover every unit");
    const int arm = side == CovSide::OwnArm ? idx.arm_of(i) : 1 - idx.arm_of(i);
    if (l < 2 || l > idx.arm_size(arm))
        throw BoundError("cond_cov_hat: window size l must lie in [2, arm size]");
    std::vector<int> window;
    if (side == CovSide::OwnArm)
        match_same_into(idx, i, l, window);
    else
        idx.nearest_in_arm(i, arm, l, window);
    Eigen::VectorXd out;
    window_covariance(x, y, window, out);
    return out;
}

double sigma2_hat(const Dataset& ds, const ScoreIndex& idx, int m, int q) {
    const MatchStats st = compute_match_stats(ds, idx, m);
    const int n = ds.n();
    if (q < 2 || q > std::min(ds.n0(), ds.n1()))
        throw BoundError("sigma2_hat: window size q must lie in [2, min(n0, n1)]");

    KahanSum tau_acc;
    for (int i = 0; i < n; ++i)
        tau_acc.add((2.0 * ds.w(i) - 1.0) *
                    (ds.y(i) - st.match_mean[static_cast<std::size_t>(i)]));
    const double tau = tau_acc.value() / n;

    KahanSum contrast, reuse;
    std::vector<int> window;
    window.reserve(static_cast<std::size_t>(q));
    for (int i = 0; i < n; ++i) {
        const double e = (2.0 * ds.w(i) - 1.0) *
                             (ds.y(i) - st.match_mean[static_cast<std::size_t>(i)]) -
                         tau;
        contrast.add(e * e);

        const double kr = static_cast<double>(st.k_count[static_cast<std::size_t>(i)]) / m;
        const double weight = kr * kr + (2.0 * m - 1.0) / m * kr;
        match_same_into(idx, i, q, window);
        reuse.add(weight * window_variance(ds.y(), window));
    }
    return contrast.value() / n + reuse.value() / n;
}

Eigen::VectorXd c_hat(const Dataset& ds, const ScoreIndex& idx,
                      const Eigen::VectorXd& theta_hat, int l,
                      const LinkFunction& link) {
    if (idx.n() != ds.n())
        throw ShapeError("c_hat: index and dataset sizes differ");
    if (theta_hat.size() != ds.k())
        throw ShapeError("c_hat: theta length must equal the number of covariates");
    if (l < 2 || l > std::min(ds.n0(), ds.n1()))
        throw BoundError("c_hat: window size l must lie in [2, min(n0, n1)]");

    const int n = ds.n();
    const Eigen::Index k = ds.k();
    const Eigen::VectorXd t = ds.x() * theta_hat;

    std::vector<KahanSum> acc(static_cast<std::size_t>(k));
    std::vector<int> window;
    window.reserve(static_cast<std::size_t>(l));
    Eigen::VectorXd cov_own(k), cov_opp(k);
    for (int i = 0; i < n; ++i) {
        const double p = idx.score(i);
        if (!(p > 0.0 && p < 1.0))
            throw DomainError("c_hat: fitted scores must lie strictly inside (0,1)");
        const double dens = link.density(t(i));

        match_same_into(idx, i, l, window);
        window_covariance(ds.x(), ds.y(), window, cov_own);
        window.clear();
        idx.nearest_in_arm(i, 1 - idx.arm_of(i), l, window);
        window_covariance(ds.x(), ds.y(), window, cov_opp);

        // the own-arm window estimates the unit's observed surface, the
        // opposite window the counterfactual one; the treated surface is
        // weighted by 1/p, the control surface by 1/(1-p)
        const Eigen::VectorXd& treated_side = ds.w(i) == 1 ? cov_own : cov_opp;
        const Eigen::VectorXd& control_side = ds.w(i) == 1 ? cov_opp : cov_own;
        for (Eigen::Index c = 0; c < k; ++c)
            acc[static_cast<std::size_t>(c)].add(
                dens * (treated_side(c) / p + control_side(c) / (1.0 - p)));
    }

    Eigen::VectorXd out(k);
    for (Eigen::Index c = 0; c < k; ++c)
        out(c) = acc[static_cast<std::size_t>(c)].value() / n;
    return out;
}

VarianceComponents adjusted_variance(double sigma2, const Eigen::VectorXd& c,
                                     const Eigen::MatrixXd& info,
                                     int m_used, int q_used, int l_used) {
    if (info.rows() != info.cols() || c.size() != info.rows())
        throw ShapeError("adjusted_variance: c and info dimensions differ");
    if (!(sigma2 >= 0.0))
        throw DomainError("adjusted_variance: sigma2 must be nonnegative");

    const auto ldlt = checked_ldlt(info, "adjusted_variance: information matrix is singular");
    const double correction = c.dot(ldlt.solve(c));

    VarianceComponents vc;
    vc.sigma2_hat = sigma2;
    vc.c_hat = c;
    vc.info_hat = info;
    vc.m_used = m_used;
    vc.q_used = q_used;
    vc.l_used = l_used;
    vc.adjusted = sigma2 - correction;
    if (vc.adjusted < 0.0) {
        vc.adjusted = 1e-12 * sigma2;
        vc.floored = true;
        std::cerr << "warning: adjusted variance " << sigma2 - correction
                  << " is negative; floored at " << vc.adjusted << "\n";
    }
    return vc;
}

std::pair<double, double> confidence_interval(double tau_hat, double adjusted,
                                              int n, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw DomainError("confidence_interval: alpha must lie in (0,1)");
    if (!(adjusted >= 0.0))
        throw DomainError("confidence_interval: variance must be nonnegative");
    if (n < 1)
        throw DomainError("confidence_interval: n must be positive");
    const double z = norm_quantile(1.0 - alpha / 2.0);
    const double hw = z * std::sqrt(adjusted / n);
    return {tau_hat - hw, tau_hat + hw};
}

VarianceComponents estimate_variance(const Dataset& ds, const ScoreIndex& idx,
                                     const Eigen::VectorXd& theta_hat,
                                     const TuningRule& tuning,
                                     const LinkFunction& link) {
    const auto r = tuning.resolved(ds);
    const double s2 = sigma2_hat(ds, idx, r.m, r.q);
    const Eigen::VectorXd c = c_hat(ds, idx, theta_hat, r.l, link);
    const Eigen::MatrixXd info = fisher_information(ds, theta_hat, link);
    return adjusted_variance(s2, c, info, r.m, r.q, r.l);
}

} // namespace psmatch
