#include "psmatch/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace psmatch {

Dataset::Dataset(Eigen::MatrixXd x, std::vector<int> w, Eigen::VectorXd y)
    : x_(std::move(x)), w_(std::move(w)), y_(std::move(y)) {
    const auto n = x_.rows();
    if (static_cast<Eigen::Index>(w_.size()) != n || y_.size() != n)
        throw ShapeError("dataset: covariates, treatment, and outcome lengths differ");
    if (n < 2)
        throw DomainError("dataset: need at least two units");
    if (x_.cols() < 1)
        throw DomainError("dataset: need at least one covariate column");
    if (!x_.allFinite() || !y_.allFinite())
        throw DomainError("dataset: covariates and outcomes must be finite");
    for (int wi : w_) {
        if (wi != 0 && wi != 1)
            throw DomainError("dataset: treatment values must be 0 or 1");
        wi == 0 ? ++n0_ : ++n1_;
    }
    if (n0_ == 0)
        throw DegenerateArmError("dataset: no control units (w=0)");
    if (n1_ == 0)
        throw DegenerateArmError("dataset: no treated units (w=1)");
}

Dataset Dataset::from_observations(const std::vector<Observation>& obs) {
    if (obs.empty())
        throw DomainError("dataset: need at least two units");
    const auto n = static_cast<Eigen::Index>(obs.size());
    const auto k = static_cast<Eigen::Index>(obs.front().x.size());
    Eigen::MatrixXd x(n, k);
    std::vector<int> w(obs.size());
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Observation& o = obs[static_cast<std::size_t>(i)];
        if (static_cast<Eigen::Index>(o.x.size()) != k)
            throw ShapeError("dataset: observations have unequal covariate lengths");
        for (Eigen::Index c = 0; c < k; ++c) x(i, c) = o.x[static_cast<std::size_t>(c)];
        w[static_cast<std::size_t>(i)] = o.w;
        y(i) = o.y;
    }
    return Dataset(std::move(x), std::move(w), std::move(y));
}

Observation Dataset::observation(int i) const {
    Observation o;
    o.x.resize(static_cast<std::size_t>(k()));
    for (int c = 0; c < k(); ++c) o.x[static_cast<std::size_t>(c)] = x_(i, c);
    o.w = w(i);
    o.y = y_(i);
    return o;
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

double parse_double(const std::string& cell, int row, const std::string& col) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "cannot parse '%s' as a number in column '%s' at row %d",
                      cell.c_str(), col.c_str(), row);
        throw ParseError(buf);
    }
    return v;
}

// Returns the 1-based covariate position for names like x1, x7; 0 otherwise.
int covariate_position(const std::string& name, const std::string& prefix) {
    if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0)
        return 0;
    int pos = 0;
    auto* first = name.data() + prefix.size();
    auto [ptr, ec] = std::from_chars(first, name.data() + name.size(), pos);
    if (ec != std::errc() || ptr != name.data() + name.size() || pos < 1)
        return 0;
    return pos;
}

} // namespace

Dataset load_dataset(const std::string& path, const CsvLayout& layout) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open input file " + path);

    std::string line;
    if (!std::getline(in, line))
        throw ParseError("empty file: " + path);
    const auto header = split_csv(line);

    // map each column to its role, rejecting anything unrecognized
    int y_col = -1, w_col = -1;
    std::vector<int> x_cols; // x_cols[j] = column index of covariate j+1
    for (std::size_t c = 0; c < header.size(); ++c) {
        const std::string& name = header[c];
        if (name == layout.outcome) {
            if (y_col >= 0) throw ParseError("duplicate column '" + name + "'");
            y_col = static_cast<int>(c);
        } else if (name == layout.treatment) {
            if (w_col >= 0) throw ParseError("duplicate column '" + name + "'");
            w_col = static_cast<int>(c);
        } else if (int pos = covariate_position(name, layout.covariate_prefix); pos > 0) {
            if (static_cast<std::size_t>(pos) > x_cols.size()) x_cols.resize(static_cast<std::size_t>(pos), -1);
            if (x_cols[static_cast<std::size_t>(pos - 1)] >= 0)
                throw ParseError("duplicate column '" + name + "'");
            x_cols[static_cast<std::size_t>(pos - 1)] = static_cast<int>(c);
        } else {
            throw ParseError("unrecognized column '" + name + "' in " + path);
        }
    }
    if (y_col < 0) throw ParseError("missing outcome column '" + layout.outcome + "'");
    if (w_col < 0) throw ParseError("missing treatment column '" + layout.treatment + "'");
    if (x_cols.empty())
        throw ParseError("no covariate columns '" + layout.covariate_prefix + "1'...");
    for (std::size_t j = 0; j < x_cols.size(); ++j) {
        if (x_cols[j] < 0) {
            char buf[120];
            std::snprintf(buf, sizeof buf, "covariate columns have a gap: missing '%s%zu'",
                          layout.covariate_prefix.c_str(), j + 1);
            throw ParseError(buf);
        }
    }

    std::vector<Observation> obs;
    int row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue; // tolerate blank/trailing lines
        ++row;
        const auto cells = split_csv(line);
        if (cells.size() != header.size()) {
            char buf[120];
            std::snprintf(buf, sizeof buf, "row %d has %zu cells, header has %zu",
                          row, cells.size(), header.size());
            throw ParseError(buf);
        }
        Observation o;
        o.y = parse_double(cells[static_cast<std::size_t>(y_col)], row, layout.outcome);
        const double wv = parse_double(cells[static_cast<std::size_t>(w_col)], row, layout.treatment);
        if (wv != 0.0 && wv != 1.0) {
            char buf[120];
            std::snprintf(buf, sizeof buf, "treatment value %g is not 0 or 1 at row %d", wv, row);
            throw DomainError(buf);
        }
        o.w = static_cast<int>(wv);
        o.x.resize(x_cols.size());
        for (std::size_t j = 0; j < x_cols.size(); ++j)
            o.x[j] = parse_double(cells[static_cast<std::size_t>(x_cols[j])], row,
                                  layout.covariate_prefix + std::to_string(j + 1));
        obs.push_back(std::move(o));
    }
    if (obs.empty())
        throw ParseError("no data rows in " + path);
    return Dataset::from_observations(obs);
}

ValidationReport validate(const Dataset& ds, const std::vector<double>& scores,
                          double low, double high) {
    if (static_cast<int>(scores.size()) != ds.n())
        throw ShapeError("validate: one score per unit required");
    if (!(low < high))
        throw DomainError("validate: need low < high");

    ValidationReport rep;
    rep.n = ds.n();
    rep.low = low;
    rep.high = high;
    bool seen[2] = {false, false};
    for (int i = 0; i < ds.n(); ++i) {
        const double s = scores[static_cast<std::size_t>(i)];
        if (!(s > 0.0 && s < 1.0)) {
            char buf[120];
            std::snprintf(buf, sizeof buf, "score %g of unit %d is outside (0,1)", s, i);
            throw DomainError(buf);
        }
        const int arm = ds.w(i);
        if (!seen[arm]) {
            rep.min_score[arm] = rep.max_score[arm] = s;
            seen[arm] = true;
        } else {
            rep.min_score[arm] = std::min(rep.min_score[arm], s);
            rep.max_score[arm] = std::max(rep.max_score[arm], s);
        }
        if (s < low || s > high) rep.flagged.push_back(i);
    }
    return rep;
}

std::string ValidationReport::text() const {
    char buf[256];
    std::string out = "overlap diagnostics\n";
    for (int arm = 0; arm < 2; ++arm) {
        std::snprintf(buf, sizeof buf, "  arm %d score range [%.6f, %.6f]\n",
                      arm, min_score[arm], max_score[arm]);
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "  %zu of %d units outside [%g, %g]\n",
                  flagged.size(), n, low, high);
    out += buf;
    for (int i : flagged) {
        std::snprintf(buf, sizeof buf, "  unit %d flagged\n", i);
        out += buf;
    }
    return out;
}

std::string ValidationReport::key_values() const {
    char buf[256];
    std::string out;
    std::snprintf(buf, sizeof buf, "overlap_warnings = %zu\n", flagged.size());
    out += buf;
    std::snprintf(buf, sizeof buf, "score_min_arm0 = %.10g\nscore_max_arm0 = %.10g\n",
                  min_score[0], max_score[0]);
    out += buf;
    std::snprintf(buf, sizeof buf, "score_min_arm1 = %.10g\nscore_max_arm1 = %.10g\n",
                  min_score[1], max_score[1]);
    out += buf;
    return out;
}

} // namespace psmatch
