#include "memwalk/dynamics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace memwalk {

namespace {

Vec2 rk4_step(MemoryParam p, Vec2 x, double dt) {
    const Vec2 k1 = drift(p, x);
    const Vec2 k2 = drift(p, x + (0.5 * dt) * k1);
    const Vec2 k3 = drift(p, x + (0.5 * dt) * k2);
    const Vec2 k4 = drift(p, x + dt * k3);
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

OdeTrajectory ode_integrate(MemoryParam p, SimplexPoint x0, double T, double dt, int sample_every) {
    if (!(dt > 0.0) || !(T >= 0.0)) throw std::invalid_argument("ode_integrate: need dt > 0 and T >= 0");
    if (sample_every < 1) throw std::invalid_argument("ode_integrate: sample_every must be >= 1");

    const auto steps = static_cast<std::int64_t>(std::llround(T / dt));
    OdeTrajectory out;
    Vec2 x = x0.vec();
    out.samples.push_back({0.0, x});
    for (std::int64_t k = 1; k <= steps; ++k) {
        x = rk4_step(p, x, dt);
        if (!SimplexPoint::contains(x)) {
            std::ostringstream os;
            os.precision(17);
            os << "ode_integrate: state (" << x.x1 << ", " << x.x2 << ") left the simplex at t = "
               << static_cast<double>(k) * dt;
            throw IntegrationError(os.str());
        }
        if (k % sample_every == 0 || k == steps) out.samples.push_back({static_cast<double>(k) * dt, x});
    }
    out.terminal = x;

    out.distance = std::numeric_limits<double>::infinity();
    for (const auto& fp : fixed_points(p)) {
        const double d = norm(x - fp.location.vec());
        if (d < out.distance) {
            out.distance = d;
            out.nearest_kind = fp.kind;
            out.nearest_zero = fp.location.vec();
        }
    }
    return out;
}

std::vector<SimplexPoint> basin_grid(int per_side) {
    if (per_side < 1) throw std::invalid_argument("basin_grid: per_side must be >= 1");
    std::vector<SimplexPoint> out;
    out.reserve(static_cast<std::size_t>(per_side * per_side));
    for (int i = 0; i < per_side; ++i) {
        const double u = (i + 0.5) / per_side;
        for (int j = 0; j < per_side; ++j) {
            const double v = (j + 0.5) / per_side;
            out.emplace_back(u * (1.0 - v), u * v);
        }
    }
    return out;
}

std::vector<BasinResult> basin_scan(MemoryParam p, const std::vector<SimplexPoint>& starts, double T, double dt) {
    std::vector<BasinResult> out;
    out.reserve(starts.size());
    const int keep_ends_only = std::numeric_limits<int>::max();
    for (const auto& s : starts) out.push_back({s, ode_integrate(p, s, T, dt, keep_ends_only)});
    return out;
}

std::vector<SimplexPoint> newton_fixed_points(MemoryParam p, int grid) {
    if (grid < 1) throw std::invalid_argument("newton_fixed_points: grid must be >= 1");
    constexpr double kAccept = 1e-14;
    constexpr double kDistinct = 1e-6;

    std::vector<SimplexPoint> roots;
    for (int i = 0; i <= grid; ++i) {
        for (int j = 0; i + j <= grid; ++j) {
            Vec2 x{static_cast<double>(i) / grid, static_cast<double>(j) / grid};
            double r = norm(drift(p, x));
            for (int it = 0; it < 100 && r >= kAccept; ++it) {
                const auto dx = solve(jacobian(p, x), -1.0 * drift(p, x));
                if (!dx) break;
                double t = 1.0;
                Vec2 next = x + *dx;
                double rn = norm(drift(p, next));
                for (int h = 0; h < 40 && rn >= r; ++h) {
                    t *= 0.5;
                    next = x + t * *dx;
                    rn = norm(drift(p, next));
                }
                if (rn >= r) break;
                x = next;
                r = rn;
            }
            if (!(r < kAccept) || !SimplexPoint::contains(x)) continue;
            bool fresh = true;
            for (const auto& q : roots)
                if (norm(q.vec() - x) <= kDistinct) fresh = false;
            if (fresh) roots.emplace_back(x);
        }
    }
    if (roots.size() > 4) throw std::logic_error("newton_fixed_points: more than four zeros found");
    return roots;
}

double sigma1_by_quadrature(MemoryParam mp, Branch branch) {
    const double p = mp.value();
    if (!(p > thresholds::kP3) || thresholds::is_p3(p)) {
        std::ostringstream os;
        os.precision(17);
        os << "sigma1_by_quadrature: p = " << p << " is outside (p3, 1)";
        throw RegimeError(os.str());
    }
    const SimplexPoint gamma = ballistic_zero(mp, branch);
    const Mat2 a2 = jacobian(mp, gamma) + 0.5 * Mat2::identity();
    const Mat2 s2 = noise_cov(gamma).matrix;
    Eigen::Matrix2d A;
    A << a2.a, a2.b, a2.c, a2.d;
    Eigen::Matrix2d S;
    S << s2.a, s2.b, s2.c, s2.d;
    const Eigen::Vector2d u(1.0, -1.0);

    auto integrand = [&](double s) {
        const Eigen::Matrix2d E = (s * A).exp();
        const Eigen::Vector2d w = E.transpose() * u;
        return w.dot(S * w);
    };

    const double rate = -A.eigenvalues().real().maxCoeff();
    const double chunk = 1.0 / rate;
    using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;
    double total = 0.0;
    for (int k = 0; k < 10000; ++k) {
        const double piece = Quad::integrate(integrand, k * chunk, (k + 1) * chunk, 15, 1e-14);
        total += piece;
        if (std::abs(piece) < 1e-17 * std::abs(total)) break;
    }
    return total;
}

}  // namespace memwalk
