#pragma once

#include <string>

#include "psmatch/dataset.hpp"
#include "psmatch/estimator.hpp"
#include "psmatch/propensity.hpp"
#include "psmatch/variance.hpp"

namespace psmatch {

// Everything the estimate pipeline produces for one dataset.
struct EstimateReport {
    PropensityFit fit;
    ValidationReport validation;
    AteEstimate ate;
    VarianceComponents components;

    std::string key_values() const; // "name = value" lines for the CLI
};

// Fit, validate, match, estimate, adjust, interval. An explicitly requested
// tuning.m larger than the smaller arm is refused with a BoundError; when
// tuning.m is 0 the default match count is used (clamped to the smaller
// arm).
EstimateReport analyze_dataset(const Dataset& ds, const TuningRule& tuning = {},
                               const LinkFunction& link = logistic_link());

} // namespace psmatch
