#include "memwalk/linalg2.hpp"

namespace memwalk {

namespace {

// Null vector of the rank-one matrix m - lambda*I, taken from the row with
// the larger norm for conditioning.
std::optional<Vec2> null_vector(const Mat2& m, double lambda) {
    const Vec2 r1{m.a - lambda, m.b};
    const Vec2 r2{m.c, m.d - lambda};
    const Vec2 row = norm(r1) >= norm(r2) ? r1 : r2;
    Vec2 v{row.x2, -row.x1};
    const double scale = std::max(std::abs(v.x1), std::abs(v.x2));
    if (scale == 0.0 || std::abs(v.x1) <= 1e-14 * scale) return std::nullopt;
    return Vec2{1.0, v.x2 / v.x1};
}

}  // namespace

std::optional<Eigen2> eigen_decompose(const Mat2& m) {
    const double half_tr = 0.5 * m.trace();
    // (a-d)^2/4 + bc avoids the cancellation in tr^2/4 - det.
    const double half_gap = 0.5 * (m.a - m.d);
    const double disc = half_gap * half_gap + m.b * m.c;
    if (disc < 0.0) return std::nullopt;
    const double root = std::sqrt(disc);

    Eigen2 out;
    out.values = {half_tr + root, half_tr - root};

    const double scale = std::max(1.0, max_abs_entry(m));
    if (std::abs(m.b) <= 1e-15 * scale && std::abs(m.c) <= 1e-15 * scale &&
        std::abs(m.a - m.d) <= 1e-15 * scale) {
        out.degenerate = true;
        out.vectors = {Vec2{1.0, 1.0}, Vec2{1.0, -1.0}};
        return out;
    }
    for (int i = 0; i < 2; ++i) {
        auto v = null_vector(m, out.values[i]);
        if (!v) return std::nullopt;
        out.vectors[i] = *v;
    }
    return out;
}

std::optional<Mat2> solve_lyapunov(const Mat2& a, const Mat2& q) {
    // Unknowns (m11, m12, m22) of the symmetric solution.
    //   2 a11 m11 + 2 a12 m12                       = -q11
    //   a21 m11 + (a11 + a22) m12 + a12 m22         = -q12
    //             2 a21 m12       + 2 a22 m22       = -q22
    const std::array<std::array<double, 3>, 3> k{{
        {2.0 * a.a, 2.0 * a.b, 0.0},
        {a.c, a.a + a.d, a.b},
        {0.0, 2.0 * a.c, 2.0 * a.d},
    }};
    const std::array<double, 3> rhs{-q.a, -q.b, -q.d};

    auto det3 = [](const std::array<std::array<double, 3>, 3>& x) {
        return x[0][0] * (x[1][1] * x[2][2] - x[1][2] * x[2][1]) -
               x[0][1] * (x[1][0] * x[2][2] - x[1][2] * x[2][0]) +
               x[0][2] * (x[1][0] * x[2][1] - x[1][1] * x[2][0]);
    };
    const double det = det3(k);
    if (std::abs(det) < 1e-300) return std::nullopt;

    std::array<double, 3> sol{};
    for (int col = 0; col < 3; ++col) {
        auto kc = k;
        for (int row = 0; row < 3; ++row) kc[row][col] = rhs[row];
        sol[col] = det3(kc) / det;
    }
    return Mat2{sol[0], sol[1], sol[1], sol[2]};
}

std::optional<Vec2> solve(const Mat2& m, Vec2 rhs, double singular_tol) {
    const double det = m.det();
    if (std::abs(det) < singular_tol) return std::nullopt;
    return Vec2{(m.d * rhs.x1 - m.b * rhs.x2) / det, (m.a * rhs.x2 - m.c * rhs.x1) / det};
}

}  // namespace memwalk
