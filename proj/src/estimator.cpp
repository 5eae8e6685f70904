#include "psmatch/estimator.hpp"

#include <bit>
#include <cmath>
#include <iostream>

#include "psmatch/stats.hpp"

namespace psmatch {

MatchStats compute_match_stats(const Dataset& ds, const ScoreIndex& idx, int m) {
    if (idx.n() != ds.n())
        throw ShapeError("match stats: index and dataset sizes differ");
    const int cap = std::min(ds.n0(), ds.n1());
    if (m < 1 || m > cap)
        throw BoundError("match stats: match count must be in [1, min(n0, n1)]");

    const int n = ds.n();
    MatchStats st;
    st.match_mean.resize(static_cast<std::size_t>(n));
    st.k_count.assign(static_cast<std::size_t>(n), 0);
    std::vector<int> buf;
    buf.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < n; ++i) {
        match_opposite_into(idx, i, m, buf);
        double acc = 0.0;
        for (int j : buf) {
            acc += ds.y(j);
            ++st.k_count[static_cast<std::size_t>(j)];
        }
        st.match_mean[static_cast<std::size_t>(i)] = acc / m;
    }
    return st;
}

double ate_matching(const Dataset& ds, const ScoreIndex& idx, int m, CrossCheck check) {
    const MatchStats st = compute_match_stats(ds, idx, m);
    const int n = ds.n();
    KahanSum direct;  // matched-contrast form
    KahanSum reuse;   // reuse-count form, algebraically identical
    for (int i = 0; i < n; ++i) {
        const double sgn = 2.0 * ds.w(i) - 1.0;
        direct.add(sgn * (ds.y(i) - st.match_mean[static_cast<std::size_t>(i)]));
        const double kr = static_cast<double>(st.k_count[static_cast<std::size_t>(i)]) / m;
        reuse.add(sgn * (1.0 + kr) * ds.y(i));
    }
    const double a = direct.value() / n;
    const double b = reuse.value() / n;
    if (std::abs(a - b) > 1e-10 * (1.0 + std::abs(a))) {
        if (check == CrossCheck::Throw)
            throw Error("ate_matching: the two estimator forms disagree");
        std::cerr << "warning: ate_matching cross-check mismatch: "
                  << a << " vs " << b << "\n";
    }
    return a;
}

double ate_matching(const Dataset& ds, const std::vector<double>& scores, int m,
                    CrossCheck check) {
    const ScoreIndex idx(scores, ds.w());
    return ate_matching(ds, idx, m, check);
}

int default_match_count(int n) {
    if (n < 1)
        throw DomainError("default_match_count: n must be positive");
    // largest 2^j with 4^j <= n, i.e. largest power of two below sqrt(n)
    const int j = (std::bit_width(static_cast<unsigned>(n)) - 1) / 2;
    return 1 << j;
}

} // namespace psmatch
