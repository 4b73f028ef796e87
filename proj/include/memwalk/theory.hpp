#pragma once

// Closed-form asymptotics of the two-channel elephant random walk.
//
// The walk's empirical step fractions Gamma_n = (n_+/n, n_-/n) follow a
// stochastic-approximation recursion with the quadratic drift h_p below.
// Everything in this header is a pure function of its arguments.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "memwalk/linalg2.hpp"

namespace memwalk {

/// Raised when a constant is requested outside the parameter range in which
/// it is defined.
class RegimeError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised at p = 7/8, where almost-sure convergence is not established.
class OpenCaseError : public RegimeError {
public:
    using RegimeError::RegimeError;
};

/// Memory probability p in the open interval (0, 1).
class MemoryParam {
public:
    explicit MemoryParam(double p);
    constexpr double value() const { return p_; }

private:
    double p_;
};

namespace thresholds {
/// Diffusive / superdiffusive boundary.
inline constexpr double kP1 = 11.0 / 16.0;
/// Superdiffusive / ballistic boundary (open case).
inline constexpr double kP2 = 7.0 / 8.0;
/// Onset of Gaussian fluctuations around the ballistic limit, (113+sqrt(97))/128.
inline const double kP3 = (113.0 + std::sqrt(97.0)) / 128.0;
/// |p - kP3| below this counts as the critical point.
inline constexpr double kP3Tolerance = 1e-15;

bool is_p1(double p);
bool is_p2(double p);
bool is_p3(double p);
}  // namespace thresholds

enum class RegimeLabel {
    Diffusive,
    CriticalLower,
    Superdiffusive,
    OpenBoundary,
    BallisticSuperdiffusiveFluct,
    CriticalUpper,
    BallisticGaussianFluct,
};

std::string_view to_string(RegimeLabel label);

struct Regime {
    RegimeLabel label;
    double p1 = thresholds::kP1;
    double p2 = thresholds::kP2;
    double p3 = thresholds::kP3;
};

/// One row of the regime partition of (0,1), for documentation output.
struct RegimeInterval {
    RegimeLabel label;
    double lower;
    double upper;
    bool point;  ///< a single threshold value rather than an open interval
    std::string_view fluctuation_law;
};

Regime regime_classify(MemoryParam p);
const std::vector<RegimeInterval>& regime_table();

/// Point (x1, x2) of the simplex x1, x2 >= 0, x1 + x2 <= 1, where x1 is the
/// fraction of +1 steps and x2 the fraction of -1 steps. Construction accepts
/// a 1e-9 slack so that numerically computed points on the boundary pass.
class SimplexPoint {
public:
    static constexpr double kSlack = 1e-9;

    SimplexPoint(double x1, double x2);
    explicit SimplexPoint(Vec2 v) : SimplexPoint(v.x1, v.x2) {}

    constexpr double x1() const { return v_.x1; }
    constexpr double x2() const { return v_.x2; }
    constexpr double zero_fraction() const { return 1.0 - v_.x1 - v_.x2; }
    constexpr Vec2 vec() const { return v_; }

    static bool contains(Vec2 v, double slack = kSlack);

private:
    Vec2 v_;
};

/// Which of the two ballistic zeros: Plus is gamma_p (more +1 steps, positive
/// speed), Minus is its component swap.
enum class Branch { Plus, Minus };

enum class FixedPointKind { Origin, Symmetric, Plus, Minus };
enum class Stability { LinearlyStable, LinearlyUnstable };

std::string_view to_string(FixedPointKind kind);
std::string_view to_string(Stability s);

struct FixedPointReport {
    SimplexPoint location;
    FixedPointKind kind;
    double lambda1;  ///< larger eigenvalue of the Jacobian
    double lambda2;
    Vec2 nu1;        ///< eigenvector of lambda1, first component +1
    Vec2 nu2;
    Stability stability;
    /// Largest deviation between the generic eigensolver and the closed-form
    /// eigenvalues/eigenvectors at this zero.
    double closed_form_deviation = 0.0;
    /// Set at p = 7/8, where the stability classification has no theorem
    /// behind it.
    bool out_of_scope = false;
};

struct EigenData {
    double lambda1;
    double lambda2;
    Vec2 nu1;
    Vec2 nu2;
    double closed_form_deviation;
};

struct AlphaBeta {
    double alpha;
    double beta;
};

/// Noise covariance sigma(gamma) = diag(gamma) - gamma gammaᵀ.
struct NoiseCovariance {
    Mat2 matrix;
};

// Vector field and linearisation ---------------------------------------------

/// h_p(x); accepts any point of the plane so integrators can evaluate
/// intermediate stages.
Vec2 drift(MemoryParam p, Vec2 x);
inline Vec2 drift(MemoryParam p, SimplexPoint x) { return drift(p, x.vec()); }

Mat2 jacobian(MemoryParam p, Vec2 x);
inline Mat2 jacobian(MemoryParam p, SimplexPoint x) { return jacobian(p, x.vec()); }

NoiseCovariance noise_cov(SimplexPoint gamma);

// Fixed points ---------------------------------------------------------------

inline constexpr Vec2 kSymmetricZero{1.0 / 3.0, 1.0 / 3.0};

/// gamma_p for p > 7/8.
SimplexPoint ballistic_zero(MemoryParam p, Branch branch = Branch::Plus);

/// Zeros of the drift in the simplex with eigen data and stability.
std::vector<FixedPointReport> fixed_points(MemoryParam p);

/// Eigen data at a zero of the drift. Throws std::invalid_argument if
/// |h_p(point)| >= 1e-8.
EigenData eigen_at(MemoryParam p, SimplexPoint point);

// Asymptotic constants ---------------------------------------------------------

/// Ballistic speed: |lim S_n/n|.
double speed_c(MemoryParam p);

/// CLT variance for p in (0, 11/16) or (p3, 1).
double sigma1(MemoryParam p, Branch branch = Branch::Plus);

/// Critical CLT variance at p = 11/16 or p = p3.
double sigma2(MemoryParam p, Branch branch = Branch::Plus);

/// Same value as sigma2 at p3, rebuilt directly from the eigenvector
/// components instead of through the 2x2 helpers.
double sigma2_from_components(MemoryParam p, Branch branch = Branch::Plus);

/// Decay exponent of S_n/n - Lambda_p on the superdiffusive intervals.
double exponent_y(MemoryParam p);

/// Growth exponent of Var(S_n) away from the three thresholds.
double conjectured_variance_exponent(MemoryParam p);

/// Coefficients with alpha*nu1 + beta*nu2 = (1,-1) in the eigenbasis of the
/// selected ballistic zero; beta = 1 - alpha.
AlphaBeta alpha_beta(MemoryParam p, Branch branch = Branch::Plus);

/// The published closed form for alpha. It equals alpha_beta(p, Branch::Minus).
double alpha_closed_form(MemoryParam p);

/// Lyapunov solution M of (J + I/2) M + M (J + I/2)ᵀ = -sigma at the zero
/// `gamma`; throws RegimeError unless every eigenvalue of J + I/2 is below
/// -1e-9.
Mat2 stationary_covariance(MemoryParam p, SimplexPoint gamma);

}  // namespace memwalk
