#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "helpers.hpp"
#include "reference.hpp"
#include "psmatch/estimator.hpp"

using namespace psmatch;

TEST_CASE("four-unit fixture point estimate") {
    const Dataset ds = th::t4_dataset();
    const ScoreIndex idx = build_index(th::t4_scores(), th::t4_w());
    // per-unit contrasts at m=1: (5-2) + (3-1) - (1-3) - (2-5) = 10
    CHECK(ate_matching(ds, idx, 1, CrossCheck::Throw) == 2.5);
    // at m=2 every unit averages the whole opposite arm
    CHECK(ate_matching(ds, idx, 2, CrossCheck::Throw) == 2.5);
}

TEST_CASE("four-unit fixture match statistics") {
    const Dataset ds = th::t4_dataset();
    const ScoreIndex idx = build_index(th::t4_scores(), th::t4_w());

    const MatchStats s1 = compute_match_stats(ds, idx, 1);
    CHECK(s1.match_mean == std::vector<double>{2.0, 3.0, 1.0, 5.0});
    CHECK(s1.k_count == std::vector<int>{1, 1, 1, 1});

    const MatchStats s2 = compute_match_stats(ds, idx, 2);
    CHECK(s2.match_mean == std::vector<double>{1.5, 4.0, 1.5, 4.0});
    CHECK(s2.k_count == std::vector<int>{2, 2, 2, 2});
}

TEST_CASE("constant outcomes estimate exactly zero") {
    std::mt19937 gen(8);
    for (int rep = 0; rep < 30; ++rep) {
        th::Instance inst = th::random_instance(gen, 4, 30, rep % 2 == 0);
        Eigen::VectorXd y = Eigen::VectorXd::Constant(inst.ds.n(), 7.25);
        const Dataset ds(inst.ds.x(), inst.ds.w(), y);
        const ScoreIndex idx = build_index(inst.scores, ds.w());
        const int cap = std::min(idx.arm_size(0), idx.arm_size(1));
        CHECK(ate_matching(ds, idx, 1 + rep % cap, CrossCheck::Throw) == 0.0);
    }
}

TEST_CASE("estimate responds predictably to outcome maps") {
    std::mt19937 gen(99);
    for (int rep = 0; rep < 25; ++rep) {
        const th::Instance inst = th::random_instance(gen, 6, 40, false);
        const ScoreIndex idx = build_index(inst.scores, inst.ds.w());
        const int cap = std::min(idx.arm_size(0), idx.arm_size(1));
        const int m = 1 + rep % cap;
        const double base = ate_matching(inst.ds, idx, m, CrossCheck::Throw);

        // shifting every outcome by a constant leaves the contrast unchanged
        Eigen::VectorXd shifted = inst.ds.y().array() + 11.5;
        const Dataset ds_shift(inst.ds.x(), inst.ds.w(), shifted);
        CHECK(ate_matching(ds_shift, idx, m, CrossCheck::Throw) ==
              doctest::Approx(base).epsilon(1e-12).scale(1.0));

        // scaling outcomes scales the contrast
        Eigen::VectorXd scaled = inst.ds.y() * -3.0;
        const Dataset ds_scale(inst.ds.x(), inst.ds.w(), scaled);
        CHECK(ate_matching(ds_scale, idx, m, CrossCheck::Throw) ==
              doctest::Approx(-3.0 * base).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("swapping arms negates the estimate exactly") {
    // flipping w sends each unit's opposite arm to the same candidate set,
    // so the match sets coincide and every contrast term flips sign only
    std::mt19937 gen(1234);
    for (int rep = 0; rep < 40; ++rep) {
        const th::Instance inst = th::random_instance(gen, 6, 36, true);
        std::vector<int> flipped(inst.ds.w().size());
        for (std::size_t i = 0; i < flipped.size(); ++i)
            flipped[i] = 1 - inst.ds.w()[i];
        const Dataset ds_flip(inst.ds.x(), flipped, inst.ds.y());
        const ScoreIndex idx = build_index(inst.scores, inst.ds.w());
        const ScoreIndex idx_flip = build_index(inst.scores, flipped);
        const int cap = std::min(idx.arm_size(0), idx.arm_size(1));
        const int m = 1 + rep % cap;
        const double a = ate_matching(inst.ds, idx, m, CrossCheck::Throw);
        const double b = ate_matching(ds_flip, idx_flip, m, CrossCheck::Throw);
        CHECK(a == -b);
    }
}

TEST_CASE("the two estimator forms agree on random instances") {
    std::mt19937 gen(2718);
    for (int rep = 0; rep < 1000; ++rep) {
        const th::Instance inst = th::random_instance(gen, 4, 50, rep % 2 == 0);
        const ScoreIndex idx = build_index(inst.scores, inst.ds.w());
        const int cap = std::min(idx.arm_size(0), idx.arm_size(1));
        std::uniform_int_distribution<int> m_dist(1, cap);
        const int m = m_dist(gen);
        // Throw mode asserts the dual-form identity internally
        const double tau = ate_matching(inst.ds, idx, m, CrossCheck::Throw);
        CHECK(tau == doctest::Approx(ref::ate(inst.ds, inst.scores, m)).epsilon(1e-10));
    }
}

TEST_CASE("estimate is invariant to relabeling the units") {
    std::mt19937 gen(31415);
    for (int rep = 0; rep < 20; ++rep) {
        const th::Instance inst = th::random_instance(gen, 8, 30, false);
        const int n = inst.ds.n();
        std::vector<int> perm(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), gen);

        Eigen::MatrixXd xp(n, inst.ds.k());
        Eigen::VectorXd yp(n);
        std::vector<int> wp(static_cast<std::size_t>(n));
        std::vector<double> sp(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const int src = perm[static_cast<std::size_t>(i)];
            xp.row(i) = inst.ds.x_row(src);
            yp(i) = inst.ds.y(src);
            wp[static_cast<std::size_t>(i)] = inst.ds.w(src);
            sp[static_cast<std::size_t>(i)] = inst.scores[static_cast<std::size_t>(src)];
        }
        const Dataset dsp(xp, wp, yp);
        const ScoreIndex idx = build_index(inst.scores, inst.ds.w());
        const ScoreIndex idxp = build_index(sp, wp);
        const int cap = std::min(idx.arm_size(0), idx.arm_size(1));
        const int m = 1 + rep % cap;
        CHECK(ate_matching(inst.ds, idx, m, CrossCheck::Throw) ==
              doctest::Approx(ate_matching(dsp, idxp, m, CrossCheck::Throw))
                  .epsilon(1e-12));
    }
}

TEST_CASE("match count bounds are enforced") {
    const Dataset ds = th::t4_dataset();
    const ScoreIndex idx = build_index(th::t4_scores(), th::t4_w());
    CHECK_THROWS_AS(ate_matching(ds, idx, 0), BoundError);
    CHECK_THROWS_AS(ate_matching(ds, idx, 3), BoundError);
    CHECK_THROWS_AS(compute_match_stats(ds, idx, 0), BoundError);
    CHECK_THROWS_AS(compute_match_stats(ds, idx, 3), BoundError);
}

TEST_CASE("default match count is the largest power of two below sqrt(n)") {
    CHECK(default_match_count(1) == 1);
    CHECK(default_match_count(2) == 1);
    CHECK(default_match_count(3) == 1);
    CHECK(default_match_count(4) == 2);
    CHECK(default_match_count(15) == 2);
    CHECK(default_match_count(16) == 4);
    CHECK(default_match_count(63) == 4);
    CHECK(default_match_count(64) == 8);
    CHECK(default_match_count(512) == 16);
    CHECK(default_match_count(1024) == 32);
    CHECK(default_match_count(2048) == 32);
    CHECK(default_match_count(4096) == 64);
    CHECK(default_match_count(8192) == 64);
    CHECK_THROWS_AS(default_match_count(0), DomainError);
    for (int n = 1; n <= 5000; ++n) {
        const int m = default_match_count(n);
        CHECK((m & (m - 1)) == 0);
        CHECK(static_cast<double>(m) * m <= static_cast<double>(n));
        CHECK(4.0 * m * m > static_cast<double>(n));
    }
}

TEST_CASE("score-vector overload matches the explicit index") {
    std::mt19937 gen(5);
    for (int rep = 0; rep < 10; ++rep) {
        const th::Instance inst = th::random_instance(gen, 6, 25, false);
        const ScoreIndex idx = build_index(inst.scores, inst.ds.w());
        const int cap = std::min(idx.arm_size(0), idx.arm_size(1));
        const int m = 1 + rep % cap;
        CHECK(ate_matching(inst.ds, idx, m) == ate_matching(inst.ds, inst.scores, m));
    }
}
