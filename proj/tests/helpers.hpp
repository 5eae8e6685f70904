#pragma once

// Shared fixtures and random-instance generators for the test suite. The
// generators use std::mt19937 on purpose: test randomness must not share
// code with the library's own generator.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "psmatch/dataset.hpp"

namespace th {

// the four-unit worked instance used across modules:
//   unit 0: w=1 y=5 s=0.62 | unit 1: w=0 y=1 s=0.50
//   unit 2: w=1 y=3 s=0.40 | unit 3: w=0 y=2 s=0.71
inline std::vector<double> t4_scores() { return {0.62, 0.50, 0.40, 0.71}; }
inline std::vector<int> t4_w() { return {1, 0, 1, 0}; }
inline std::vector<double> t4_y() { return {5.0, 1.0, 3.0, 2.0}; }

// covariate column defaults to the score values themselves
inline psmatch::Dataset t4_dataset(std::vector<double> xcol = t4_scores()) {
    Eigen::MatrixXd x(4, 1);
    for (int i = 0; i < 4; ++i) x(i, 0) = xcol[static_cast<std::size_t>(i)];
    Eigen::VectorXd y(4);
    y << 5.0, 1.0, 3.0, 2.0;
    return psmatch::Dataset(x, t4_w(), y);
}

struct Instance {
    psmatch::Dataset ds;
    std::vector<double> scores;
};

// Random dataset with both arms of size >= 2 and optional heavy score
// ties (scores snapped to a coarse dyadic grid).
inline Instance random_instance(std::mt19937& gen, int n_min, int n_max,
                                bool with_ties, int k = 1) {
    std::uniform_int_distribution<int> n_dist(n_min, n_max);
    std::uniform_real_distribution<double> s_dist(0.05, 0.95);
    std::normal_distribution<double> y_dist(0.0, 2.0);
    std::normal_distribution<double> x_dist(0.0, 1.0);

    const int n = n_dist(gen);
    std::vector<int> w(static_cast<std::size_t>(n), 0);
    // two forced units per arm, the rest fair coin flips
    w[0] = w[1] = 1;
    std::bernoulli_distribution coin(0.5);
    for (int i = 4; i < n; ++i) w[static_cast<std::size_t>(i)] = coin(gen) ? 1 : 0;
    std::shuffle(w.begin(), w.end(), gen);
    // shuffling may break the guarantee; restore it deterministically
    int n1 = 0;
    for (int wi : w) n1 += wi;
    for (int i = 0; n1 < 2 && i < n; ++i)
        if (w[static_cast<std::size_t>(i)] == 0) { w[static_cast<std::size_t>(i)] = 1; ++n1; }
    for (int i = 0; n - n1 < 2 && i < n; ++i)
        if (w[static_cast<std::size_t>(i)] == 1) { w[static_cast<std::size_t>(i)] = 0; --n1; }

    std::vector<double> s(static_cast<std::size_t>(n));
    for (double& v : s) {
        v = s_dist(gen);
        if (with_ties) v = std::round(v * 16.0) / 16.0; // coarse dyadic grid
    }
    Eigen::MatrixXd x(n, k);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        for (int c = 0; c < k; ++c) x(i, c) = x_dist(gen);
        y(i) = y_dist(gen);
    }
    return Instance{psmatch::Dataset(x, w, y), std::move(s)};
}

} // namespace th
