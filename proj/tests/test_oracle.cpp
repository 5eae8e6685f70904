#include "doctest.h"

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "reference.hpp"
#include "psmatch/estimator.hpp"
#include "psmatch/oracle.hpp"

using namespace psmatch;

TEST_CASE("brute-force matcher on the fixture") {
    const auto s = th::t4_scores();
    const auto w = th::t4_w();
    CHECK(brute_force_match(s, w, 0, 1) == std::vector<int>{3});
    CHECK(brute_force_match(s, w, 1, 1) == std::vector<int>{2});
    CHECK(brute_force_match(s, w, 2, 1) == std::vector<int>{1});
    CHECK(brute_force_match(s, w, 3, 1) == std::vector<int>{0});
    CHECK(brute_force_match(s, w, 0, 2) == std::vector<int>{1, 3});
    CHECK(brute_force_match(s, w, 1, 2) == std::vector<int>{0, 2});

    CHECK_THROWS_AS(brute_force_match(s, w, 0, 3), BoundError);
    CHECK_THROWS_AS(brute_force_match(s, w, 0, 0), BoundError);
    CHECK_THROWS_AS(brute_force_match(s, {1, 0, 1}, 0, 1), ShapeError);
}

TEST_CASE("brute-force estimate equals the engine estimate") {
    const Dataset t4 = th::t4_dataset();
    CHECK(brute_force_ate(t4, th::t4_scores(), 1) == 2.5);
    CHECK(brute_force_ate(t4, th::t4_scores(), 2) == 2.5);

    std::mt19937 gen(63);
    for (int rep = 0; rep < 50; ++rep) {
        const th::Instance inst = th::random_instance(gen, 4, 40, rep % 2 == 0);
        const ScoreIndex idx = build_index(inst.scores, inst.ds.w());
        const int cap = std::min(idx.arm_size(0), idx.arm_size(1));
        const int m = 1 + rep % cap;
        CHECK(ate_matching(inst.ds, idx, m, CrossCheck::Throw) ==
              doctest::Approx(brute_force_ate(inst.ds, inst.scores, m)).epsilon(1e-12));
    }
}

TEST_CASE("efficiency bound closed forms") {
    const BoundResult d1 = efficiency_bound(1);
    CHECK(d1.method == "closed-form");
    CHECK(d1.sigma2_eff == doctest::Approx(6.116233966740400).epsilon(1e-13));
    CHECK(d1.sigma_eff == doctest::Approx(2.473102093877323).epsilon(1e-13));

    const BoundResult d2 = efficiency_bound(2);
    CHECK(d2.sigma2_eff == doctest::Approx(8.199567300073733).epsilon(1e-13));
    CHECK(d2.sigma_eff == doctest::Approx(2.863488658974177).epsilon(1e-13));

    // both designs share the assignment coefficients, so the noise term
    // 2 + 2 * (2 sinh(1/2)/1) * (2 sinh(1)/2) is common; they differ only
    // in the treatment-control slope gaps, (2,4) versus (-3,-6), entering
    // the surface-variance term (a^2 + b^2)/12
    const double common = 2.0 + 2.0 * (2.0 * std::sinh(0.5) / 1.0) * (2.0 * std::sinh(1.0) / 2.0);
    CHECK(d1.sigma2_eff == doctest::Approx((4.0 + 16.0) / 12.0 + common).epsilon(1e-13));
    CHECK(d2.sigma2_eff == doctest::Approx((9.0 + 36.0) / 12.0 + common).epsilon(1e-13));
}

TEST_CASE("quadrature reproduces the closed form") {
    for (int design : {1, 2}) {
        const BoundResult cf = efficiency_bound(design, BoundMethod::ClosedForm);
        const BoundResult qd = efficiency_bound(design, BoundMethod::Quadrature);
        CHECK(qd.method == "quadrature");
        CHECK(std::abs(cf.sigma2_eff - qd.sigma2_eff) < 1e-9);
        CHECK(std::abs(cf.sigma2_eff - qd.sigma2_eff) < 1e-6); // contract level
        CHECK(qd.sigma_eff == doctest::Approx(std::sqrt(qd.sigma2_eff)).epsilon(1e-15));
    }
}

TEST_CASE("unknown design ids are refused") {
    CHECK_THROWS_AS(efficiency_bound(3), DomainError);
    CHECK_THROWS_AS(efficiency_bound(0), DomainError);
    CHECK_THROWS_AS(efficiency_bound(-1), DomainError);
}
