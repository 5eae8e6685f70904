#pragma once

// Direct-definition reference implementations, used only by tests. Each
// routine is the obvious O(n^2) transcription of the quantity it computes:
// full scans, full sorts, textbook two-pass moments. The optimized library
// paths are required to agree with these.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "psmatch/dataset.hpp"

namespace ref {

// m nearest units of `arm` to unit i by (|score diff|, unit index)
inline std::vector<int> nearest(const std::vector<double>& s, const std::vector<int>& w,
                                int i, int arm, int m) {
    std::vector<std::pair<double, int>> cand;
    for (int j = 0; j < static_cast<int>(s.size()); ++j)
        if (w[static_cast<std::size_t>(j)] == arm)
            cand.emplace_back(std::abs(s[static_cast<std::size_t>(i)] -
                                       s[static_cast<std::size_t>(j)]),
                              j);
    std::sort(cand.begin(), cand.end());
    std::vector<int> out;
    for (int t = 0; t < m; ++t) out.push_back(cand[static_cast<std::size_t>(t)].second);
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<int> opposite_set(const std::vector<double>& s,
                                     const std::vector<int>& w, int i, int m) {
    return nearest(s, w, i, 1 - w[static_cast<std::size_t>(i)], m);
}

// own-arm window with the unit itself always a member
inline std::vector<int> same_set(const std::vector<double>& s,
                                 const std::vector<int>& w, int i, int m) {
    std::vector<std::pair<double, int>> cand;
    for (int j = 0; j < static_cast<int>(s.size()); ++j)
        if (w[static_cast<std::size_t>(j)] == w[static_cast<std::size_t>(i)] && j != i)
            cand.emplace_back(std::abs(s[static_cast<std::size_t>(i)] -
                                       s[static_cast<std::size_t>(j)]),
                              j);
    std::sort(cand.begin(), cand.end());
    std::vector<int> out{i};
    for (int t = 0; t < m - 1; ++t) out.push_back(cand[static_cast<std::size_t>(t)].second);
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<int> counts(const std::vector<double>& s, const std::vector<int>& w,
                               int m) {
    std::vector<int> k(s.size(), 0);
    for (int j = 0; j < static_cast<int>(s.size()); ++j)
        for (int i : opposite_set(s, w, j, m)) ++k[static_cast<std::size_t>(i)];
    return k;
}

inline double ate(const psmatch::Dataset& ds, const std::vector<double>& s, int m) {
    double acc = 0.0;
    for (int i = 0; i < ds.n(); ++i) {
        double mean = 0.0;
        for (int j : opposite_set(s, ds.w(), i, m)) mean += ds.y(j);
        mean /= m;
        acc += (2.0 * ds.w(i) - 1.0) * (ds.y(i) - mean);
    }
    return acc / ds.n();
}

inline double sample_var(const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(v.size() - 1);
}

inline double cond_var(const psmatch::Dataset& ds, const std::vector<double>& s,
                       int i, int q) {
    std::vector<double> ys;
    for (int j : same_set(s, ds.w(), i, q)) ys.push_back(ds.y(j));
    return sample_var(ys);
}

inline Eigen::VectorXd window_cov(const psmatch::Dataset& ds, const std::vector<int>& win) {
    const Eigen::Index k = ds.k();
    Eigen::VectorXd mx = Eigen::VectorXd::Zero(k);
    double my = 0.0;
    for (int j : win) {
        mx += ds.x_row(j).transpose();
        my += ds.y(j);
    }
    mx /= static_cast<double>(win.size());
    my /= static_cast<double>(win.size());
    Eigen::VectorXd out = Eigen::VectorXd::Zero(k);
    for (int j : win)
        out += (ds.x_row(j).transpose() - mx) * (ds.y(j) - my);
    return out / static_cast<double>(win.size() - 1);
}

inline double sigma2(const psmatch::Dataset& ds, const std::vector<double>& s,
                     int m, int q) {
    const double tau = ate(ds, s, m);
    const std::vector<int> k = counts(s, ds.w(), m);
    double first = 0.0, second = 0.0;
    for (int i = 0; i < ds.n(); ++i) {
        double mean = 0.0;
        for (int j : opposite_set(s, ds.w(), i, m)) mean += ds.y(j);
        mean /= m;
        const double e = (2.0 * ds.w(i) - 1.0) * (ds.y(i) - mean) - tau;
        first += e * e;
        const double kr = static_cast<double>(k[static_cast<std::size_t>(i)]) / m;
        second += (kr * kr + (2.0 * m - 1.0) / m * kr) * cond_var(ds, s, i, q);
    }
    return first / ds.n() + second / ds.n();
}

// naive logistic pieces, written independently of the library link
inline double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }
inline double logistic_dens(double t) {
    const double p = logistic(t);
    return p * (1.0 - p);
}

inline Eigen::VectorXd c_vec(const psmatch::Dataset& ds, const std::vector<double>& s,
                             const Eigen::VectorXd& theta, int l) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(ds.k());
    for (int i = 0; i < ds.n(); ++i) {
        const double t = (ds.x_row(i) * theta).value();
        const double dens = logistic_dens(t);
        const double p = s[static_cast<std::size_t>(i)];
        const Eigen::VectorXd own = window_cov(ds, same_set(s, ds.w(), i, l));
        const Eigen::VectorXd opp = window_cov(ds, opposite_set(s, ds.w(), i, l));
        const Eigen::VectorXd& treated_side = ds.w(i) == 1 ? own : opp;
        const Eigen::VectorXd& control_side = ds.w(i) == 1 ? opp : own;
        acc += dens * (treated_side / p + control_side / (1.0 - p));
    }
    return acc / ds.n();
}

inline Eigen::MatrixXd info(const psmatch::Dataset& ds, const Eigen::VectorXd& theta) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(ds.k(), ds.k());
    for (int i = 0; i < ds.n(); ++i) {
        const double t = (ds.x_row(i) * theta).value();
        const double p = logistic(t);
        const double dens = logistic_dens(t);
        acc += dens * dens / (p * (1.0 - p)) * ds.x_row(i).transpose() * ds.x_row(i);
    }
    return acc / ds.n();
}

inline double adjusted(double s2, const Eigen::VectorXd& c, const Eigen::MatrixXd& inf) {
    // full-pivot LU, a different factorization from the library's LDLT
    return s2 - c.dot(inf.fullPivLu().solve(c));
}

// published two-sided normal quantiles, independent of the library routine
inline constexpr double kZ975 = 1.959963984540054;
inline constexpr double kZ95 = 1.6448536269514722;

inline std::pair<double, double> ci95(double tau, double adj, int n) {
    const double hw = kZ975 * std::sqrt(adj / n);
    return {tau - hw, tau + hw};
}

inline std::pair<double, double> ci90(double tau, double adj, int n) {
    const double hw = kZ95 * std::sqrt(adj / n);
    return {tau - hw, tau + hw};
}

} // namespace ref
