#pragma once

// Deterministic side of the stochastic approximation: the mean-field ODE
// dx/dt = h_p(x), a Newton root finder for h_p, and a quadrature evaluation
// of the CLT variance that does not go through the Lyapunov solver.

#include <optional>
#include <stdexcept>
#include <vector>

#include "memwalk/theory.hpp"

namespace memwalk {

class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OdeSample {
    double t;
    Vec2 x;
};

struct OdeTrajectory {
    std::vector<OdeSample> samples;
    Vec2 terminal;
    FixedPointKind nearest_kind = FixedPointKind::Origin;
    Vec2 nearest_zero;
    double distance = 0.0;
};

/// Classic RK4 from x0 to time T with step dt, keeping every
/// `sample_every`-th state (the initial and final states are always kept).
/// Throws IntegrationError if a state leaves the simplex expanded by 1e-9.
OdeTrajectory ode_integrate(MemoryParam p, SimplexPoint x0, double T, double dt, int sample_every = 1);

/// Interior starts u(1-v), uv with u, v = (i + 1/2)/per_side: per_side^2
/// points, none on the boundary or the diagonal.
std::vector<SimplexPoint> basin_grid(int per_side = 20);

struct BasinResult {
    SimplexPoint start;
    OdeTrajectory trajectory;
};

std::vector<BasinResult> basin_scan(MemoryParam p, const std::vector<SimplexPoint>& starts, double T, double dt);

/// Damped Newton on h_p from a triangular grid of `grid` x `grid` starts.
/// Accepted roots satisfy |h_p| < 1e-14 inside the simplex and are
/// deduplicated at distance 1e-6. Non-convergent starts are dropped.
std::vector<SimplexPoint> newton_fixed_points(MemoryParam p, int grid = 12);

/// Sigma1 on (p3, 1) as the integral over s >= 0 of
/// uᵀ e^{sA} sigma e^{sAᵀ} u with A = J + I/2 and u = (1, -1),
/// by adaptive Gauss-Kronrod quadrature.
double sigma1_by_quadrature(MemoryParam p, Branch branch = Branch::Plus);

}  // namespace memwalk
