#include <doctest.h>

#include <cmath>
#include <limits>

#include "memwalk/theory.hpp"

using namespace memwalk;

namespace {

// Central differences of the drift; an oracle for the analytic Jacobian.
Mat2 numeric_jacobian(MemoryParam p, Vec2 x) {
    const double h = 1e-6;
    const Vec2 d1 = (1.0 / (2 * h)) * (drift(p, Vec2{x.x1 + h, x.x2}) - drift(p, Vec2{x.x1 - h, x.x2}));
    const Vec2 d2 = (1.0 / (2 * h)) * (drift(p, Vec2{x.x1, x.x2 + h}) - drift(p, Vec2{x.x1, x.x2 - h}));
    return {d1.x1, d2.x1, d1.x2, d2.x2};
}

}  // namespace

TEST_CASE("thresholds") {
    CHECK(thresholds::kP1 == 0.6875);
    CHECK(thresholds::kP2 == 0.875);
    CHECK(thresholds::kP3 == doctest::Approx(0.9597567016).epsilon(1e-9));
    // p3 is the root of 128 p^2 - 226 p + 99 above 7/8.
    const double p3 = thresholds::kP3;
    CHECK(std::abs(128 * p3 * p3 - 226 * p3 + 99) < 1e-12);
    CHECK(thresholds::is_p3(p3));
    CHECK_FALSE(thresholds::is_p3(p3 + 1e-9));
}

TEST_CASE("memory parameter must lie in (0,1)") {
    CHECK_THROWS_AS(MemoryParam(0.0), std::invalid_argument);
    CHECK_THROWS_AS(MemoryParam(1.0), std::invalid_argument);
    CHECK_THROWS_AS(MemoryParam(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
    CHECK(MemoryParam(0.3).value() == 0.3);
}

TEST_CASE("simplex point validation") {
    CHECK_NOTHROW(SimplexPoint(0.5, 0.5));
    CHECK_NOTHROW(SimplexPoint(0.5, 0.5 + 1e-10));
    CHECK_THROWS(SimplexPoint(0.6, 0.5));
    CHECK_THROWS(SimplexPoint(-0.1, 0.5));
    CHECK(SimplexPoint(0.2, 0.3).zero_fraction() == doctest::Approx(0.5));
}

TEST_CASE("regime partition") {
    auto label = [](double p) { return regime_classify(MemoryParam(p)).label; };
    CHECK(label(0.1) == RegimeLabel::Diffusive);
    CHECK(label(0.6875) == RegimeLabel::CriticalLower);
    CHECK(label(0.8) == RegimeLabel::Superdiffusive);
    CHECK(label(0.875) == RegimeLabel::OpenBoundary);
    CHECK(label(0.9) == RegimeLabel::BallisticSuperdiffusiveFluct);
    CHECK(label(thresholds::kP3) == RegimeLabel::CriticalUpper);
    CHECK(label(0.97) == RegimeLabel::BallisticGaussianFluct);
    CHECK(to_string(RegimeLabel::OpenBoundary) == "OpenBoundary");

    // The table covers (0,1) without gaps.
    const auto& table = regime_table();
    REQUIRE(!table.empty());
    CHECK(table.front().lower == 0.0);
    CHECK(table.back().upper == 1.0);
    for (std::size_t i = 1; i < table.size(); ++i) CHECK(table[i].lower == table[i - 1].upper);
}

TEST_CASE("analytic Jacobian matches finite differences") {
    for (double p : {0.1, 0.5, 0.7, 0.9, 0.99}) {
        for (Vec2 x : {Vec2{0.2, 0.3}, Vec2{0.05, 0.9}, Vec2{0.6, 0.1}, Vec2{1.0 / 3, 1.0 / 3}}) {
            const Mat2 a = jacobian(MemoryParam(p), x);
            const Mat2 n = numeric_jacobian(MemoryParam(p), x);
            CHECK(max_abs_entry(a - n) < 1e-8);
        }
    }
}

TEST_CASE("drift vanishes at the closed-form zeros") {
    for (int i = 0; i < 100; ++i) {
        const double p = (i + 0.5) / 100.0;
        if (thresholds::is_p2(p)) continue;
        const MemoryParam mp(p);
        CHECK(norm(drift(mp, kSymmetricZero)) < 1e-15);
        CHECK(norm(drift(mp, Vec2{0, 0})) == 0.0);
        if (p > thresholds::kP2) {
            CHECK(norm(drift(mp, ballistic_zero(mp, Branch::Plus))) < 1e-14);
            CHECK(norm(drift(mp, ballistic_zero(mp, Branch::Minus))) < 1e-14);
        }
    }
}

TEST_CASE("ballistic zeros are swapped images") {
    const MemoryParam p(0.93);
    const auto plus = ballistic_zero(p, Branch::Plus);
    const auto minus = ballistic_zero(p, Branch::Minus);
    CHECK(plus.x1() == minus.x2());
    CHECK(plus.x2() == minus.x1());
    CHECK(plus.x1() > plus.x2());
    CHECK(speed_c(p) == doctest::Approx(plus.x1() - plus.x2()).epsilon(1e-15));
}

TEST_CASE("fixed point inventory and stability") {
    const auto low = fixed_points(MemoryParam(0.5));
    REQUIRE(low.size() == 2);
    int symmetric = 0;
    for (const auto& f : low) {
        if (f.kind == FixedPointKind::Symmetric) {
            ++symmetric;
            CHECK(f.stability == Stability::LinearlyStable);
        }
        CHECK(f.closed_form_deviation < 1e-10);
    }
    CHECK(symmetric == 1);

    const auto high = fixed_points(MemoryParam(0.95));
    REQUIRE(high.size() == 4);
    for (const auto& f : high) {
        if (f.kind == FixedPointKind::Symmetric) CHECK(f.stability == Stability::LinearlyUnstable);
        if (f.kind == FixedPointKind::Plus || f.kind == FixedPointKind::Minus)
            CHECK(f.stability == Stability::LinearlyStable);
        CHECK(f.closed_form_deviation < 1e-10);
        CHECK(f.lambda1 >= f.lambda2);
    }

    const auto open = fixed_points(MemoryParam(0.875));
    for (const auto& f : open) CHECK(f.out_of_scope);

    CHECK(to_string(FixedPointKind::Origin) == "origin");
    CHECK(to_string(FixedPointKind::Symmetric) == "gamma0");
    CHECK(to_string(FixedPointKind::Plus) == "gamma_p");
    CHECK(to_string(FixedPointKind::Minus) == "gamma_p_bar");
}

TEST_CASE("eigen data solves the eigenproblem") {
    for (double p : {0.3, 0.6875, 0.8, 0.9, 0.97}) {
        const MemoryParam mp(p);
        std::vector<SimplexPoint> zeros{SimplexPoint(kSymmetricZero)};
        if (p > thresholds::kP2) {
            zeros.push_back(ballistic_zero(mp, Branch::Plus));
            zeros.push_back(ballistic_zero(mp, Branch::Minus));
        }
        for (const auto& z : zeros) {
            const auto e = eigen_at(mp, z);
            const Mat2 j = jacobian(mp, z);
            CHECK(norm(j * e.nu1 - e.lambda1 * e.nu1) < 1e-12);
            CHECK(norm(j * e.nu2 - e.lambda2 * e.nu2) < 1e-12);
            CHECK(e.lambda1 >= e.lambda2);
        }
    }
    CHECK_THROWS_AS(eigen_at(MemoryParam(0.5), SimplexPoint(0.2, 0.2)), std::invalid_argument);
}

TEST_CASE("largest eigenvalue crosses -1/2 at the thresholds") {
    const auto at_p1 = eigen_at(MemoryParam(thresholds::kP1), SimplexPoint(kSymmetricZero));
    CHECK(at_p1.lambda1 == -0.5);
    const MemoryParam p3(thresholds::kP3);
    const auto ball = eigen_at(p3, ballistic_zero(p3));
    CHECK(std::abs(ball.lambda1 + 0.5) < 1e-10);
}

TEST_CASE("decomposition of (1,-1) in the ballistic eigenbasis") {
    for (int i = 0; i < 50; ++i) {
        const double p = thresholds::kP2 + (i + 0.5) / 50.0 * (1.0 - thresholds::kP2);
        const MemoryParam mp(p);
        for (Branch b : {Branch::Plus, Branch::Minus}) {
            const auto ab = alpha_beta(mp, b);
            const auto e = eigen_at(mp, ballistic_zero(mp, b));
            CHECK(ab.alpha + ab.beta == doctest::Approx(1.0).epsilon(1e-14));
            const Vec2 r = ab.alpha * e.nu1 + ab.beta * e.nu2 - Vec2{1, -1};
            CHECK(norm(r) < 1e-10);
        }
        CHECK(alpha_closed_form(mp) == doctest::Approx(alpha_beta(mp, Branch::Minus).alpha).epsilon(1e-12));
    }
}

TEST_CASE("reference constants") {
    CHECK(speed_c(MemoryParam(0.95)) == doctest::Approx(0.85533373).epsilon(1e-8));
    CHECK(exponent_y(MemoryParam(0.9)) == doctest::Approx(0.1344645782).epsilon(1e-9));
    CHECK(sigma1(MemoryParam(0.5)) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(sigma1(MemoryParam(0.6)) == doctest::Approx(10.0 / 7.0).epsilon(1e-14));
    CHECK(sigma1(MemoryParam(0.97)) == doctest::Approx(0.5563910510028).epsilon(1e-11));
    CHECK(sigma1(MemoryParam(0.97), Branch::Minus) == doctest::Approx(0.5563910510028).epsilon(1e-11));
    CHECK(sigma2(MemoryParam(thresholds::kP1)) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    const MemoryParam p3(thresholds::kP3);
    for (Branch b : {Branch::Plus, Branch::Minus}) {
        CHECK(sigma2(p3, b) == doctest::Approx(0.6801174808).epsilon(1e-9));
        CHECK(sigma2_from_components(p3, b) == doctest::Approx(sigma2(p3, b)).epsilon(1e-12));
    }
}

TEST_CASE("diffusive sigma1 equals 2/(11-16p)") {
    for (int i = 1; i < 60; ++i) {
        const double p = i / 60.0 * thresholds::kP1;
        CHECK(sigma1(MemoryParam(p)) == doctest::Approx(2.0 / (11.0 - 16.0 * p)).epsilon(1e-12));
    }
}

TEST_CASE("constants outside their range raise RegimeError") {
    CHECK_THROWS_AS(sigma1(MemoryParam(0.8)), RegimeError);
    CHECK_THROWS_AS(sigma1(MemoryParam(thresholds::kP1)), RegimeError);
    CHECK_THROWS_AS(sigma2(MemoryParam(0.5)), RegimeError);
    CHECK(speed_c(MemoryParam(0.5)) == 0.0);
    CHECK_THROWS_AS(speed_c(MemoryParam(0.875)), OpenCaseError);
    CHECK_THROWS_AS(exponent_y(MemoryParam(0.5)), RegimeError);
    CHECK_THROWS_AS(ballistic_zero(MemoryParam(0.8)), RegimeError);
}

TEST_CASE("variance exponent by regime") {
    CHECK(conjectured_variance_exponent(MemoryParam(0.5)) == 1.0);
    const MemoryParam p(0.8);
    CHECK(conjectured_variance_exponent(p) == doctest::Approx(2.0 - 2.0 * exponent_y(p)));
    CHECK(conjectured_variance_exponent(p) == doctest::Approx(1.6).epsilon(1e-12));
    CHECK(conjectured_variance_exponent(MemoryParam(0.95)) == 2.0);
}

TEST_CASE("stationary covariance solves the Lyapunov equation") {
    const MemoryParam p(0.97);
    const auto g = ballistic_zero(p);
    const Mat2 m = stationary_covariance(p, g);
    const Mat2 a = jacobian(p, g) + 0.5 * Mat2::identity();
    const Mat2 residual = a * m + m * a.transpose() + noise_cov(g).matrix;
    CHECK(max_abs_entry(residual) < 1e-14);
    CHECK(quad_form(m, Vec2{1, -1}) == doctest::Approx(sigma1(p)).epsilon(1e-13));
    CHECK_THROWS_AS(stationary_covariance(MemoryParam(0.9), ballistic_zero(MemoryParam(0.9))), RegimeError);
}

TEST_CASE("noise covariance") {
    const auto s = noise_cov(SimplexPoint(0.2, 0.5)).matrix;
    CHECK(s.a == doctest::Approx(0.16));
    CHECK(s.d == doctest::Approx(0.25));
    CHECK(s.b == doctest::Approx(-0.1));
    CHECK(s.symmetric());
}

TEST_CASE("2x2 linear algebra") {
    const Mat2 m{2, 1, 1, 3};
    const auto e = eigen_decompose(m);
    REQUIRE(e);
    CHECK(e->values[0] >= e->values[1]);
    for (int k = 0; k < 2; ++k) CHECK(norm(m * e->vectors[k] - e->values[k] * e->vectors[k]) < 1e-14);
    CHECK_FALSE(eigen_decompose(Mat2{0, -1, 1, 0}).has_value());
    CHECK(eigen_decompose(Mat2::identity())->degenerate);

    const Mat2 a{-1, 0.3, 0.2, -2};
    const Mat2 q{1, 0.1, 0.1, 2};
    const auto x = solve_lyapunov(a, q);
    REQUIRE(x);
    CHECK(max_abs_entry(a * *x + *x * a.transpose() + q) < 1e-14);

    const auto s = solve(m, Vec2{3, 4});
    REQUIRE(s);
    CHECK(norm(m * *s - Vec2{3, 4}) < 1e-14);
    CHECK_FALSE(solve(Mat2{1, 2, 2, 4}, Vec2{1, 1}).has_value());
}
