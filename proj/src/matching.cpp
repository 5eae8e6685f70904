#include "psmatch/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace psmatch {

ScoreIndex::ScoreIndex(std::vector<double> scores, std::vector<int> w)
    : scores_(std::move(scores)), w_(std::move(w)) {
    if (scores_.size() != w_.size())
        throw ShapeError("score index: scores and treatment lengths differ");
    const int n = static_cast<int>(scores_.size());
    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(scores_[static_cast<std::size_t>(i)]))
            throw DomainError("score index: scores must be finite");
        const int wi = w_[static_cast<std::size_t>(i)];
        if (wi != 0 && wi != 1)
            throw DomainError("score index: treatment values must be 0 or 1");
    }
    for (int i = 0; i < n; ++i)
        sorted_[w_[static_cast<std::size_t>(i)]].push_back(i);
    if (sorted_[0].empty())
        throw DegenerateArmError("score index: no control units");
    if (sorted_[1].empty())
        throw DegenerateArmError("score index: no treated units");

    rank_.resize(static_cast<std::size_t>(n));
    for (int arm = 0; arm < 2; ++arm) {
        auto& ids = sorted_[arm];
        std::sort(ids.begin(), ids.end(), [&](int a, int b) {
            const double sa = scores_[static_cast<std::size_t>(a)];
            const double sb = scores_[static_cast<std::size_t>(b)];
            return sa < sb || (sa == sb && a < b);
        });
        auto& sc = sorted_scores_[arm];
        sc.resize(ids.size());
        for (std::size_t r = 0; r < ids.size(); ++r) {
            sc[r] = scores_[static_cast<std::size_t>(ids[r])];
            rank_[static_cast<std::size_t>(ids[r])] = static_cast<int>(r);
        }
    }
}

int ScoreIndex::check_arm(int arm) const {
    if (arm != 0 && arm != 1)
        throw BoundError("score index: arm must be 0 or 1");
    return arm;
}

// Nearest-m search: grow a window around the insertion point taking the
// closer side each step, then widen to the full layer of units tying the
// m-th distance and resolve that layer by unit index. The candidate order
// is therefore exactly (|score difference|, unit index).
void ScoreIndex::nearest_in_arm(int i, int arm, int m, std::vector<int>& out) const {
    const auto& sc = sorted_scores_[check_arm(arm)];
    const auto& ids = sorted_[arm];
    const int a = static_cast<int>(sc.size());
    if (i < 0 || i >= n())
        throw BoundError("score index: unit index out of range");
    if (m < 1 || m > a)
        throw BoundError("score index: match count out of range for the arm");

    const double s = scores_[static_cast<std::size_t>(i)];
    const double inf = std::numeric_limits<double>::infinity();
    int lo = static_cast<int>(std::lower_bound(sc.begin(), sc.end(), s) - sc.begin());
    int hi = lo;
    double dmax = 0.0;
    for (int t = 0; t < m; ++t) {
        const double dl = lo > 0 ? s - sc[static_cast<std::size_t>(lo - 1)] : inf;
        const double dr = hi < a ? sc[static_cast<std::size_t>(hi)] - s : inf;
        if (dl <= dr) {
            --lo;
            dmax = std::max(dmax, dl);
        } else {
            ++hi;
            dmax = std::max(dmax, dr);
        }
    }

    int L = lo, R = hi;
    while (L > 0 && s - sc[static_cast<std::size_t>(L - 1)] == dmax) --L;
    while (R < a && sc[static_cast<std::size_t>(R)] - s == dmax) ++R;
    if (R - L == m) {
        out.insert(out.end(), ids.begin() + L, ids.begin() + R);
        return;
    }

    // strict-inside units are all kept; the boundary layer competes by index
    int need = m;
    std::vector<int> layer;
    for (int r = L; r < R; ++r) {
        if (std::abs(s - sc[static_cast<std::size_t>(r)]) < dmax) {
            out.push_back(ids[static_cast<std::size_t>(r)]);
            --need;
        } else {
            layer.push_back(ids[static_cast<std::size_t>(r)]);
        }
    }
    std::nth_element(layer.begin(), layer.begin() + need, layer.end());
    out.insert(out.end(), layer.begin(), layer.begin() + need);
}

ScoreIndex build_index(const std::vector<double>& scores, const std::vector<int>& w) {
    return ScoreIndex(scores, w);
}

void match_opposite_into(const ScoreIndex& idx, int i, int m, std::vector<int>& out) {
    out.clear();
    idx.nearest_in_arm(i, 1 - idx.arm_of(i), m, out);
}

void match_same_into(const ScoreIndex& idx, int i, int m, std::vector<int>& out) {
    out.clear();
    idx.nearest_in_arm(i, idx.arm_of(i), m, out);
    if (std::find(out.begin(), out.end(), i) != out.end()) return;

    // i lost an index tie inside the boundary layer; it always belongs to
    // its own window, so it displaces the worst (distance, index) member,
    // leaving exactly the m-1 best others plus i.
    const double s = idx.score(i);
    std::size_t worst = 0;
    double dworst = -1.0;
    for (std::size_t t = 0; t < out.size(); ++t) {
        const double d = std::abs(s - idx.score(out[t]));
        if (d > dworst || (d == dworst && out[t] > out[worst])) {
            dworst = d;
            worst = t;
        }
    }
    out[worst] = i;
}

std::vector<int> match_set_opposite(const ScoreIndex& idx, int i, int m) {
    std::vector<int> out;
    match_opposite_into(idx, i, m, out);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> match_set_same(const ScoreIndex& idx, int i, int m) {
    std::vector<int> out;
    match_same_into(idx, i, m, out);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> match_counts(const ScoreIndex& idx, int m) {
    const int cap = std::min(idx.arm_size(0), idx.arm_size(1));
    if (m < 1 || m > cap)
        throw BoundError("match_counts: match count exceeds the smaller arm");
    std::vector<int> k(static_cast<std::size_t>(idx.n()), 0);
    std::vector<int> buf;
    buf.reserve(static_cast<std::size_t>(m));
    for (int j = 0; j < idx.n(); ++j) {
        match_opposite_into(idx, j, m, buf);
        for (int t : buf) ++k[static_cast<std::size_t>(t)];
    }
    return k;
}

} // namespace psmatch
