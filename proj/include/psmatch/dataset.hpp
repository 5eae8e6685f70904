#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "psmatch/errors.hpp"

namespace psmatch {

// One unit: covariate row, binary treatment, observed outcome.
struct Observation {
    std::vector<double> x;
    int w = 0;
    double y = 0.0;
};

// Immutable columnar sample. Construction validates everything once so the
// rest of the library can assume a well-formed dataset.
class Dataset {
public:
    // x is n-by-k. Throws ShapeError on length mismatches, DomainError on
    // non-finite values or w outside {0,1}, DegenerateArmError if an arm is
    // empty. Requires n >= 2 and k >= 1.
    Dataset(Eigen::MatrixXd x, std::vector<int> w, Eigen::VectorXd y);

    static Dataset from_observations(const std::vector<Observation>& obs);

    int n() const { return static_cast<int>(x_.rows()); }
    int k() const { return static_cast<int>(x_.cols()); }
    int n0() const { return n0_; }
    int n1() const { return n1_; }

    const Eigen::MatrixXd& x() const { return x_; }
    const Eigen::VectorXd& y() const { return y_; }
    const std::vector<int>& w() const { return w_; }

    double y(int i) const { return y_(i); }
    int w(int i) const { return w_[static_cast<std::size_t>(i)]; }
    Eigen::RowVectorXd x_row(int i) const { return x_.row(i); }

    Observation observation(int i) const;

private:
    Eigen::MatrixXd x_;
    std::vector<int> w_;
    Eigen::VectorXd y_;
    int n0_ = 0;
    int n1_ = 0;
};

// Column naming for CSV ingestion; columns are matched by name, not
// position. Covariates are covariate_prefix + "1" ... + "k".
struct CsvLayout {
    std::string outcome = "y";
    std::string treatment = "w";
    std::string covariate_prefix = "x";
};

// Strict CSV reader: unknown or duplicate columns, ragged rows, unparsable
// cells, and gaps in the covariate sequence are all ParseErrors (messages
// cite the 1-based data row). Treatment values outside {0,1} are
// DomainErrors.
Dataset load_dataset(const std::string& path, const CsvLayout& layout = {});

// Overlap diagnostics for a fitted score vector.
struct ValidationReport {
    int n = 0;
    double low = 0.0;
    double high = 0.0;
    double min_score[2] = {0.0, 0.0}; // indexed by arm
    double max_score[2] = {0.0, 0.0};
    std::vector<int> flagged; // units with score outside [low, high]

    std::string text() const;       // multi-line human-readable block
    std::string key_values() const; // "name = value" lines
};

// Checks scores against the dataset: length must match (ShapeError) and
// every score must lie strictly inside (0,1) (DomainError). Units outside
// [low, high] are flagged but never fatal.
ValidationReport validate(const Dataset& ds, const std::vector<double>& scores,
                          double low = 0.01, double high = 0.99);

} // namespace psmatch
