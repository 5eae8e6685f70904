#pragma once

#include <string>
#include <vector>

#include "psmatch/dataset.hpp"

namespace psmatch {

// Reference implementations kept deliberately naive: full scans and direct
// formula transcriptions that the fast paths are tested against, plus the
// semiparametric variance bound for the benchmark designs.

// m nearest opposite-arm units to unit i by (|score diff|, unit index),
// found by scanning and sorting the whole arm. Ascending unit index.
std::vector<int> brute_force_match(const std::vector<double>& scores,
                                   const std::vector<int>& w, int i, int m);

// Matching ATE computed straight from the definition with brute-force
// match sets.
double brute_force_ate(const Dataset& ds, const std::vector<double>& scores, int m);

enum class BoundMethod {
    ClosedForm, // variance algebra reduced by hand to elementary functions
    Quadrature  // tensor Gauss-Legendre over the covariate box
};

struct BoundResult {
    double sigma2_eff = 0.0;
    double sigma_eff = 0.0;
    std::string method;
};

// Semiparametric efficiency bound for the benchmark design's ATE. The two
// methods are independent derivations and must agree to 1e-6.
BoundResult efficiency_bound(int design_id, BoundMethod method = BoundMethod::ClosedForm);

} // namespace psmatch
