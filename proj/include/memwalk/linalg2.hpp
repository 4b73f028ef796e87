#pragma once

// Fixed-size 2-vectors and 2x2 matrices for the drift field and its
// linearisation. Everything here is constexpr-friendly value types.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <utility>

namespace memwalk {

struct Vec2 {
    double x1 = 0.0;
    double x2 = 0.0;

    constexpr Vec2& operator+=(Vec2 o) { x1 += o.x1; x2 += o.x2; return *this; }
    constexpr Vec2& operator-=(Vec2 o) { x1 -= o.x1; x2 -= o.x2; return *this; }
    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return a += b; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return a -= b; }
    friend constexpr Vec2 operator*(double s, Vec2 v) { return {s * v.x1, s * v.x2}; }
    friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x1 * b.x1 + a.x2 * b.x2; }
inline double norm(Vec2 v) { return std::hypot(v.x1, v.x2); }

/// Row-major 2x2 matrix [[a, b], [c, d]].
struct Mat2 {
    double a = 0.0, b = 0.0;
    double c = 0.0, d = 0.0;

    static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    constexpr double trace() const { return a + d; }
    constexpr double det() const { return a * d - b * c; }
    constexpr Mat2 transpose() const { return {a, c, b, d}; }
    constexpr bool symmetric() const { return b == c; }

    friend constexpr Vec2 operator*(const Mat2& m, Vec2 v) {
        return {m.a * v.x1 + m.b * v.x2, m.c * v.x1 + m.d * v.x2};
    }
    friend constexpr Mat2 operator*(const Mat2& m, const Mat2& n) {
        return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
                m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
    }
    friend constexpr Mat2 operator+(const Mat2& m, const Mat2& n) {
        return {m.a + n.a, m.b + n.b, m.c + n.c, m.d + n.d};
    }
    friend constexpr Mat2 operator-(const Mat2& m, const Mat2& n) {
        return {m.a - n.a, m.b - n.b, m.c - n.c, m.d - n.d};
    }
    friend constexpr Mat2 operator*(double s, const Mat2& m) {
        return {s * m.a, s * m.b, s * m.c, s * m.d};
    }
};

/// Quadratic form vᵀ M v.
constexpr double quad_form(const Mat2& m, Vec2 v) { return dot(v, m * v); }

inline double max_abs_entry(const Mat2& m) {
    return std::max({std::abs(m.a), std::abs(m.b), std::abs(m.c), std::abs(m.d)});
}

/// Real eigenpairs of a 2x2 matrix, ordered so that `values[0] >= values[1]`.
/// Eigenvectors are scaled so their first component is +1. `degenerate`
/// marks a scalar matrix (every vector is an eigenvector); the vectors are
/// then left at (1,1) and (1,-1) and callers must assign their own.
struct Eigen2 {
    std::array<double, 2> values{};
    std::array<Vec2, 2> vectors{};
    bool degenerate = false;
};

/// Returns std::nullopt when the eigenvalues are complex, or when an
/// eigenvector has a vanishing first component and cannot be normalised.
std::optional<Eigen2> eigen_decompose(const Mat2& m);

/// Solves A M + M Aᵀ = -Q for symmetric M given symmetric Q.
/// Returns std::nullopt if the 3x3 system is singular.
std::optional<Mat2> solve_lyapunov(const Mat2& a, const Mat2& q);

/// Solves M x = rhs; std::nullopt when |det| is below `singular_tol`.
std::optional<Vec2> solve(const Mat2& m, Vec2 rhs, double singular_tol = 1e-300);

}  // namespace memwalk
