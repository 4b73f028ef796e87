#include <doctest.h>

#include <cmath>

#include "memwalk/dynamics.hpp"

using namespace memwalk;

TEST_CASE("basin grid is strictly interior") {
    const auto g = basin_grid(20);
    CHECK(g.size() == 400);
    for (const auto& x : g) {
        CHECK(x.x1() > 0.0);
        CHECK(x.x2() > 0.0);
        CHECK(x.zero_fraction() > 0.0);
        CHECK(x.x1() != x.x2());
    }
}

TEST_CASE("ODE converges to the symmetric zero in the diffusive regime") {
    const auto t = ode_integrate(MemoryParam(0.6), SimplexPoint(0.1, 0.7), 200, 0.01, 1000);
    CHECK(t.nearest_kind == FixedPointKind::Symmetric);
    CHECK(t.distance < 1e-10);
    CHECK(t.samples.front().t == 0.0);
    CHECK(t.samples.back().t == doctest::Approx(200.0));
    CHECK(t.samples.size() == 21);
}

TEST_CASE("ODE picks the ballistic zero on the side of the start") {
    const MemoryParam p(0.95);
    const auto up = ode_integrate(p, SimplexPoint(0.4, 0.2), 200, 0.01, 100000);
    CHECK(up.nearest_kind == FixedPointKind::Plus);
    CHECK(up.distance < 1e-10);
    const auto down = ode_integrate(p, SimplexPoint(0.2, 0.4), 200, 0.01, 100000);
    CHECK(down.nearest_kind == FixedPointKind::Minus);
    // The diagonal is invariant and carries the unstable symmetric zero.
    const auto diag = ode_integrate(p, SimplexPoint(0.2, 0.2), 200, 0.01, 100000);
    CHECK(diag.nearest_kind == FixedPointKind::Symmetric);
}

TEST_CASE("ODE leaving the simplex raises IntegrationError") {
    CHECK_THROWS_AS(ode_integrate(MemoryParam(0.5), SimplexPoint(0.98, 0.01), 100, 3.0), IntegrationError);
}

TEST_CASE("Newton oracle finds exactly the closed-form zeros") {
    for (int i = 0; i < 40; ++i) {
        const double p = (i + 0.5) / 40.0;
        if (thresholds::is_p2(p)) continue;
        const MemoryParam mp(p);
        const auto roots = newton_fixed_points(mp);
        const auto closed = fixed_points(mp);
        REQUIRE(roots.size() == closed.size());
        for (const auto& r : roots) {
            double best = 1.0;
            for (const auto& f : closed) best = std::min(best, norm(r.vec() - f.location.vec()));
            CHECK(best < 1e-10);
        }
    }
}

TEST_CASE("speed from the Newton roots") {
    const MemoryParam p(0.95);
    double speed = 0.0;
    for (const auto& r : newton_fixed_points(p)) speed = std::max(speed, r.x1() - r.x2());
    CHECK(speed == doctest::Approx(speed_c(p)).epsilon(1e-12));
    CHECK(speed == doctest::Approx(0.85533373).epsilon(1e-8));
}

TEST_CASE("sigma1 by quadrature matches the Lyapunov value") {
    const MemoryParam p(0.97);
    for (Branch b : {Branch::Plus, Branch::Minus}) {
        const double q = sigma1_by_quadrature(p, b);
        CHECK(std::abs(q - sigma1(p, b)) < 1e-10);
        CHECK(std::abs(q - 0.5563910510028) < 1e-10);
    }
    for (double x : {0.965, 0.98, 0.995}) {
        const MemoryParam mp(x);
        CHECK(std::abs(sigma1_by_quadrature(mp) - sigma1(mp)) < 1e-8);
    }
    CHECK_THROWS_AS(sigma1_by_quadrature(MemoryParam(0.9)), RegimeError);
}
