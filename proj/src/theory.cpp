#include "memwalk/theory.hpp"

#include <cmath>
#include <sstream>

namespace memwalk {

namespace {

constexpr Vec2 kU{1.0, -1.0};

double disc_speed(double p) { return 32.0 * p * p - 52.0 * p + 21.0; }
double disc_eigen(double p) { return ((-64.0 * p + 161.0) * p - 134.0) * p + 37.0; }

void require_ballistic(double p, const char* what) {
    if (thresholds::is_p2(p)) throw OpenCaseError(std::string(what) + ": p = 7/8 is an open case");
    if (p < thresholds::kP2) {
        std::ostringstream os;
        os << what << ": requires p > 7/8, got p = " << p;
        throw RegimeError(os.str());
    }
}

[[noreturn]] void regime_fail(const char* what, double p, const char* domain) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": p = " << p << " is outside " << domain;
    throw RegimeError(os.str());
}

// Second components of the closed-form eigenvectors at the Minus zero; the
// Plus zero's vectors are their swap images (1, 1/v).
std::pair<double, double> minus_eigvec_components(double p) {
    const double s1 = std::sqrt(disc_speed(p));
    const double s3 = std::sqrt(disc_eigen(p));
    const double den = 4.0 - 5.0 * p + p * s1;
    return {-((1.0 - p) * s1 - s3) / den, -((1.0 - p) * s1 + s3) / den};
}

std::pair<double, double> ballistic_eigvec_components(double p, Branch branch) {
    auto [v1, v2] = minus_eigvec_components(p);
    if (branch == Branch::Minus) return {v1, v2};
    return {1.0 / v1, 1.0 / v2};
}

struct ClosedForm {
    double lambda1, lambda2;
    Vec2 nu1, nu2;
};

ClosedForm closed_form_eigen(double p, FixedPointKind kind) {
    switch (kind) {
        case FixedPointKind::Origin:
            return {1.0, 4.0 * p - 3.0, {1.0, 1.0}, {1.0, -1.0}};
        case FixedPointKind::Symmetric: {
            const double lam = -(7.0 - 8.0 * p) / 3.0;
            if (p <= 0.5) return {-1.0, lam, {1.0, 1.0}, {1.0, -1.0}};
            return {lam, -1.0, {1.0, -1.0}, {1.0, 1.0}};
        }
        case FixedPointKind::Plus:
        case FixedPointKind::Minus: {
            const double s3 = std::sqrt(disc_eigen(p));
            const double base = 4.0 - 5.0 * p;
            const auto [w1, w2] = ballistic_eigvec_components(
                p, kind == FixedPointKind::Plus ? Branch::Plus : Branch::Minus);
            return {(base + s3) / (2.0 * p - 1.0), (base - s3) / (2.0 * p - 1.0), {1.0, w1}, {1.0, w2}};
        }
    }
    return {};
}

std::optional<FixedPointKind> identify_zero(double p, Vec2 x) {
    constexpr double kNear = 1e-6;
    if (norm(x) < kNear) return FixedPointKind::Origin;
    if (norm(x - kSymmetricZero) < kNear) return FixedPointKind::Symmetric;
    if (p > thresholds::kP2) {
        const MemoryParam mp(p);
        if (norm(x - ballistic_zero(mp, Branch::Plus).vec()) < kNear) return FixedPointKind::Plus;
        if (norm(x - ballistic_zero(mp, Branch::Minus).vec()) < kNear) return FixedPointKind::Minus;
    }
    return std::nullopt;
}

double relative_gap(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

// ---------------------------------------------------------------------------

MemoryParam::MemoryParam(double p) : p_(p) {
    if (!(p > 0.0 && p < 1.0)) {
        std::ostringstream os;
        os << "memory parameter must lie in (0,1), got " << p;
        throw std::invalid_argument(os.str());
    }
}

namespace thresholds {
bool is_p1(double p) { return p == kP1; }
bool is_p2(double p) { return p == kP2; }
bool is_p3(double p) { return std::abs(p - kP3) < kP3Tolerance; }
}  // namespace thresholds

std::string_view to_string(RegimeLabel label) {
    switch (label) {
        case RegimeLabel::Diffusive: return "Diffusive";
        case RegimeLabel::CriticalLower: return "CriticalLower";
        case RegimeLabel::Superdiffusive: return "Superdiffusive";
        case RegimeLabel::OpenBoundary: return "OpenBoundary";
        case RegimeLabel::BallisticSuperdiffusiveFluct: return "BallisticSuperdiffusiveFluct";
        case RegimeLabel::CriticalUpper: return "CriticalUpper";
        case RegimeLabel::BallisticGaussianFluct: return "BallisticGaussianFluct";
    }
    return "?";
}

std::string_view to_string(FixedPointKind kind) {
    switch (kind) {
        case FixedPointKind::Origin: return "origin";
        case FixedPointKind::Symmetric: return "gamma0";
        case FixedPointKind::Plus: return "gamma_p";
        case FixedPointKind::Minus: return "gamma_p_bar";
    }
    return "?";
}

std::string_view to_string(Stability s) {
    return s == Stability::LinearlyStable ? "LinearlyStable" : "LinearlyUnstable";
}

Regime regime_classify(MemoryParam mp) {
    using namespace thresholds;
    const double p = mp.value();
    RegimeLabel label;
    if (is_p1(p)) label = RegimeLabel::CriticalLower;
    else if (is_p2(p)) label = RegimeLabel::OpenBoundary;
    else if (is_p3(p)) label = RegimeLabel::CriticalUpper;
    else if (p < kP1) label = RegimeLabel::Diffusive;
    else if (p < kP2) label = RegimeLabel::Superdiffusive;
    else if (p < kP3) label = RegimeLabel::BallisticSuperdiffusiveFluct;
    else label = RegimeLabel::BallisticGaussianFluct;
    return Regime{label};
}

const std::vector<RegimeInterval>& regime_table() {
    using namespace thresholds;
    static const std::vector<RegimeInterval> table{
        {RegimeLabel::Diffusive, 0.0, kP1, false, "sqrt(n)(S_n/n) -> N(0, 2/(11-16p))"},
        {RegimeLabel::CriticalLower, kP1, kP1, true, "sqrt(n/log n)(S_n/n) -> N(0, 2/3)"},
        {RegimeLabel::Superdiffusive, kP1, kP2, false, "n^y (S_n/n) -> L_p a.s., y = (7-8p)/3"},
        {RegimeLabel::OpenBoundary, kP2, kP2, true, "open"},
        {RegimeLabel::BallisticSuperdiffusiveFluct, kP2, kP3, false,
         "S_n/n -> +-c_p; n^y (S_n/n - Lambda_p) -> L_p a.s."},
        {RegimeLabel::CriticalUpper, kP3, kP3, true,
         "S_n/n -> +-c_p; sqrt(n/log n) fluctuations, mixture variance"},
        {RegimeLabel::BallisticGaussianFluct, kP3, 1.0, false,
         "S_n/n -> +-c_p; sqrt(n) fluctuations, mixture variance"},
    };
    return table;
}

SimplexPoint::SimplexPoint(double x1, double x2) : v_{x1, x2} {
    if (!contains(v_)) {
        std::ostringstream os;
        os << "point (" << x1 << ", " << x2 << ") is outside the simplex";
        throw std::invalid_argument(os.str());
    }
}

bool SimplexPoint::contains(Vec2 v, double slack) {
    return v.x1 >= -slack && v.x2 >= -slack && v.x1 + v.x2 <= 1.0 + slack;
}

Vec2 drift(MemoryParam mp, Vec2 x) {
    const double p = mp.value();
    const double a = (1.0 - p) * x.x1 + p * x.x2 - 1.0;
    const double c = (1.0 - p) * x.x2 + p * x.x1 - 1.0;
    const double z = 1.0 - x.x1 - x.x2;
    return {a * a - z * z - x.x1, c * c - z * z - x.x2};
}

Mat2 jacobian(MemoryParam mp, Vec2 x) {
    const double p = mp.value();
    const double a = (1.0 - p) * x.x1 + p * x.x2 - 1.0;
    const double c = (1.0 - p) * x.x2 + p * x.x1 - 1.0;
    const double z = 1.0 - x.x1 - x.x2;
    return {2.0 * (1.0 - p) * a + 2.0 * z - 1.0, 2.0 * p * a + 2.0 * z,
            2.0 * p * c + 2.0 * z, 2.0 * (1.0 - p) * c + 2.0 * z - 1.0};
}

NoiseCovariance noise_cov(SimplexPoint gamma) {
    const double g1 = gamma.x1();
    const double g2 = gamma.x2();
    return {Mat2{g1 - g1 * g1, -g1 * g2, -g1 * g2, g2 - g2 * g2}};
}

SimplexPoint ballistic_zero(MemoryParam mp, Branch branch) {
    const double p = mp.value();
    require_ballistic(p, "ballistic_zero");
    const double s = std::sqrt(disc_speed(p));
    const double den = 2.0 * (2.0 * p - 1.0) * (2.0 * p - 1.0);
    const double base = 8.0 * p * p - 10.0 * p + 3.0;
    const double hi = (base + s) / den;
    const double lo = (base - s) / den;
    return branch == Branch::Plus ? SimplexPoint(hi, lo) : SimplexPoint(lo, hi);
}

EigenData eigen_at(MemoryParam mp, SimplexPoint point) {
    const double p = mp.value();
    const double residual = norm(drift(mp, point));
    if (residual >= 1e-8) {
        std::ostringstream os;
        os << "eigen_at: (" << point.x1() << ", " << point.x2() << ") is not a zero of the drift (|h| = "
           << residual << ")";
        throw std::invalid_argument(os.str());
    }

    const auto kind = identify_zero(p, point.vec());
    std::optional<ClosedForm> cf;
    if (kind) cf = closed_form_eigen(p, *kind);

    const auto generic = eigen_decompose(jacobian(mp, point));
    if (!generic || generic->degenerate) {
        // Scalar Jacobian (gamma0 at p = 1/2): the vectors are a convention.
        if (!cf) throw std::runtime_error("eigen_at: eigensolver failed away from a known zero");
        return {cf->lambda1, cf->lambda2, cf->nu1, cf->nu2, 0.0};
    }

    EigenData out{generic->values[0], generic->values[1], generic->vectors[0], generic->vectors[1], 0.0};
    if (cf) {
        out.closed_form_deviation = std::max({
            relative_gap(out.lambda1, cf->lambda1),
            relative_gap(out.lambda2, cf->lambda2),
            relative_gap(out.nu1.x2, cf->nu1.x2),
            relative_gap(out.nu2.x2, cf->nu2.x2),
        });
    }
    return out;
}

std::vector<FixedPointReport> fixed_points(MemoryParam mp) {
    const double p = mp.value();
    std::vector<std::pair<SimplexPoint, FixedPointKind>> zeros{
        {SimplexPoint(0.0, 0.0), FixedPointKind::Origin},
        {SimplexPoint(kSymmetricZero), FixedPointKind::Symmetric},
    };
    if (p > thresholds::kP2) {
        zeros.emplace_back(ballistic_zero(mp, Branch::Plus), FixedPointKind::Plus);
        zeros.emplace_back(ballistic_zero(mp, Branch::Minus), FixedPointKind::Minus);
    }

    std::vector<FixedPointReport> out;
    out.reserve(zeros.size());
    for (const auto& [loc, kind] : zeros) {
        const EigenData e = eigen_at(mp, loc);
        out.push_back(FixedPointReport{
            loc, kind, e.lambda1, e.lambda2, e.nu1, e.nu2,
            e.lambda1 < 0.0 ? Stability::LinearlyStable : Stability::LinearlyUnstable,
            e.closed_form_deviation, thresholds::is_p2(p)});
    }
    return out;
}

double speed_c(MemoryParam mp) {
    const double p = mp.value();
    if (thresholds::is_p2(p)) throw OpenCaseError("speed_c: p = 7/8 is an open case");
    if (p < thresholds::kP2) return 0.0;
    const double q = 2.0 * p - 1.0;
    return std::sqrt(disc_speed(p)) / (q * q);
}

Mat2 stationary_covariance(MemoryParam mp, SimplexPoint gamma) {
    const Mat2 a = jacobian(mp, gamma) + 0.5 * Mat2::identity();
    const double half_tr = 0.5 * a.trace();
    const double disc = 0.25 * (a.a - a.d) * (a.a - a.d) + a.b * a.c;
    const double top = disc >= 0.0 ? half_tr + std::sqrt(disc) : half_tr;
    if (top >= -1e-9) {
        std::ostringstream os;
        os << "stationary_covariance: J + I/2 has an eigenvalue with real part " << top
           << " >= -1e-9 at p = " << mp.value();
        throw RegimeError(os.str());
    }
    const auto m = solve_lyapunov(a, noise_cov(gamma).matrix);
    if (!m) throw std::runtime_error("stationary_covariance: singular Lyapunov system");
    return *m;
}

double sigma1(MemoryParam mp, Branch branch) {
    const double p = mp.value();
    if (p < thresholds::kP1) return 2.0 / (11.0 - 16.0 * p);
    if (p > thresholds::kP3 && !thresholds::is_p3(p)) {
        return quad_form(stationary_covariance(mp, ballistic_zero(mp, branch)), kU);
    }
    regime_fail("sigma1", p, "(0, 11/16) U (p3, 1)");
}

double sigma2(MemoryParam mp, Branch branch) {
    const double p = mp.value();
    if (thresholds::is_p1(p)) return 2.0 / 3.0;
    if (!thresholds::is_p3(p)) regime_fail("sigma2", p, "{11/16, p3}");
    const SimplexPoint zero = ballistic_zero(mp, branch);
    const EigenData e = eigen_at(mp, zero);
    const AlphaBeta ab = alpha_beta(mp, branch);
    return ab.alpha * ab.alpha * quad_form(noise_cov(zero).matrix, e.nu1);
}

double sigma2_from_components(MemoryParam mp, Branch branch) {
    const double p = mp.value();
    if (thresholds::is_p1(p)) return 2.0 / 3.0;
    if (!thresholds::is_p3(p)) regime_fail("sigma2_from_components", p, "{11/16, p3}");
    const auto [w1, w2] = ballistic_eigvec_components(p, branch);
    // Cramer on [[1, 1], [w1, w2]] (alpha, beta)ᵀ = (1, -1)ᵀ.
    const double alpha = (w2 + 1.0) / (w2 - w1);
    const SimplexPoint g = ballistic_zero(mp, branch);
    const double g1 = g.x1(), g2 = g.x2();
    const double form = (g1 - g1 * g1) - 2.0 * g1 * g2 * w1 + (g2 - g2 * g2) * w1 * w1;
    return alpha * alpha * form;
}

double exponent_y(MemoryParam mp) {
    using namespace thresholds;
    const double p = mp.value();
    if (p > kP1 && p < kP2) return (7.0 - 8.0 * p) / 3.0;
    if (p > kP2 && p < kP3 && !is_p3(p)) {
        return (5.0 * p - 4.0 - std::sqrt(disc_eigen(p))) / (2.0 * p - 1.0);
    }
    regime_fail("exponent_y", p, "(11/16, 7/8) U (7/8, p3)");
}

double conjectured_variance_exponent(MemoryParam mp) {
    using namespace thresholds;
    const double p = mp.value();
    if (is_p1(p) || is_p2(p) || is_p3(p)) {
        std::ostringstream os;
        os.precision(17);
        os << "conjectured_variance_exponent: p = " << p
           << " is a threshold; the variance carries a logarithmic correction there "
              "(see sigma2 / the critical CLT)";
        throw RegimeError(os.str());
    }
    if (p < kP1) return 1.0;
    if (p < kP2) return 8.0 * (2.0 * p - 1.0) / 3.0;
    return 2.0;
}

AlphaBeta alpha_beta(MemoryParam mp, Branch branch) {
    const double p = mp.value();
    require_ballistic(p, "alpha_beta");
    const auto [w1, w2] = ballistic_eigvec_components(p, branch);
    const double alpha = (w2 + 1.0) / (w2 - w1);
    return {alpha, 1.0 - alpha};
}

double alpha_closed_form(MemoryParam mp) {
    const double p = mp.value();
    require_ballistic(p, "alpha_closed_form");
    const double s1 = std::sqrt(disc_speed(p));
    const double s3 = std::sqrt(disc_eigen(p));
    return -(4.0 - 5.0 * p + (2.0 * p - 1.0) * s1 - s3) / (2.0 * s3);
}

}  // namespace memwalk
