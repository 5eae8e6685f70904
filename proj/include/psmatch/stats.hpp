#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace psmatch {

// Compensated (Neumaier) accumulator. Keeps long Monte Carlo reductions
// accurate without depending on summation order tricks.
class KahanSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Inverse of the standard normal CDF (Wichura's PPND16 rational
// approximation, |error| < 1e-15). Domain: p in (0,1).
double norm_quantile(double p);

// Standard normal CDF, used for cross-checking the quantile routine.
double norm_cdf(double x);

// Sample variance with divisor n-1. Requires n >= 2.
double sample_variance(const std::vector<double>& v);

struct QuadratureNode {
    double x;
    double weight;
};

// Gauss-Legendre nodes and weights on [a, b]. Exact for polynomials of
// degree up to 2*order - 1.
std::vector<QuadratureNode> gauss_legendre(int order, double a, double b);

} // namespace psmatch
