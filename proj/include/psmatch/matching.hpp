#pragma once

#include <vector>

#include "psmatch/errors.hpp"

namespace psmatch {

// Score-sorted view of both treatment arms. Queries find the m nearest
// units in a chosen arm under the deterministic rule: order candidates by
// (|score difference|, unit index) and take the first m. Ties are thus
// broken toward lower unit indices and every match set has exactly m
// members.
class ScoreIndex {
public:
    // Scores must be finite; w entries must be 0 or 1; both arms must be
    // nonempty. Lengths must agree.
    ScoreIndex(std::vector<double> scores, std::vector<int> w);

    int n() const { return static_cast<int>(scores_.size()); }
    int arm_of(int i) const { return w_[static_cast<std::size_t>(i)]; }
    double score(int i) const { return scores_[static_cast<std::size_t>(i)]; }
    int arm_size(int arm) const { return static_cast<int>(sorted_[check_arm(arm)].size()); }

    // Unit indices of one arm ordered by (score, unit index).
    const std::vector<int>& sorted(int arm) const { return sorted_[check_arm(arm)]; }

    // Position of unit i inside sorted(arm_of(i)).
    int rank_of(int i) const { return rank_[static_cast<std::size_t>(i)]; }

    // Appends the m nearest units of `arm` to scores_[i] onto out
    // (unsorted). Requires 1 <= m <= arm_size(arm).
    void nearest_in_arm(int i, int arm, int m, std::vector<int>& out) const;

private:
    int check_arm(int arm) const;

    std::vector<double> scores_;
    std::vector<int> w_;
    std::vector<int> sorted_[2];
    std::vector<double> sorted_scores_[2]; // scores_ rearranged to match sorted_
    std::vector<int> rank_;
};

ScoreIndex build_index(const std::vector<double>& scores, const std::vector<int>& w);

// m nearest units in the arm opposite to unit i, ascending unit index.
std::vector<int> match_set_opposite(const ScoreIndex& idx, int i, int m);

// m nearest units in unit i's own arm, always including i itself,
// ascending unit index.
std::vector<int> match_set_same(const ScoreIndex& idx, int i, int m);

// Unsorted in-place variants for hot loops; out is cleared first.
void match_opposite_into(const ScoreIndex& idx, int i, int m, std::vector<int>& out);
void match_same_into(const ScoreIndex& idx, int i, int m, std::vector<int>& out);

// K[i] = number of opposite-arm units whose match set contains i.
// Requires m <= min(arm sizes).
std::vector<int> match_counts(const ScoreIndex& idx, int m);

} // namespace psmatch
