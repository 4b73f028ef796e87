#pragma once

// Estimators that confront ensemble data with the closed forms in theory.hpp.
//
// Conventions: every logarithm is natural; fit windows default to the
// largest half of the checkpoints (never fewer than four points); every
// tolerance is an explicit argument.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "memwalk/ensemble.hpp"
#include "memwalk/theory.hpp"

namespace memwalk {

// Fits -----------------------------------------------------------------------

struct FitWindow {
    std::optional<std::int64_t> n_lo;
    std::optional<std::int64_t> n_hi;
};

struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    double r2 = 0.0;
    std::int64_t n_lo = 0;
    std::int64_t n_hi = 0;
    std::size_t points = 0;
};

/// Ordinary least squares of ln y on ln n over the window. Requires at least
/// four points with y > 0.
ExponentFit fit_loglog(std::span<const std::int64_t> n, std::span<const double> y, FitWindow window = {});

/// Slope of ln Var(S_n) against ln n.
ExponentFit variance_exponent(const EnsembleResult& ensemble, FitWindow window = {});

/// Slope of ln Var(S_n/n - centre) against ln n, using only replicas with
/// `included[i]`.
ExponentFit fluctuation_exponent(const EnsembleResult& ensemble, std::span<const double> centers,
                                 const std::vector<bool>& included, FitWindow window = {});

// Branch assignment -----------------------------------------------------------

/// Lambda-hat per replica: sign(S at the final checkpoint) * c. Replicas that
/// end at S = 0 are excluded (centre 0, included = false).
struct BranchAssignment {
    std::vector<double> centers;
    std::vector<bool> included;
    std::int64_t excluded = 0;
};

BranchAssignment assign_branches(const EnsembleResult& ensemble, double speed);

/// All replicas included with centre 0.
BranchAssignment no_branches(std::size_t replicas);

// Verification reports --------------------------------------------------------

enum class Verdict { Pass, Fail, Diagnostic };
std::string_view to_string(Verdict v);

struct Provenance {
    std::uint64_t seed = 0;
    std::int64_t replicas = 0;
    std::int64_t n = 0;
    double p = 0.0;
};

struct VerificationReport {
    std::string name;
    double theory_value = 0.0;
    double estimate = 0.0;
    double uncertainty = 0.0;
    double tolerance = 0.0;
    Verdict verdict = Verdict::Diagnostic;
    Provenance provenance;

    bool passed() const { return verdict != Verdict::Fail; }
};

/// PASS iff |estimate - theory| <= tolerance.
VerificationReport judge(std::string name, double theory, double estimate, double uncertainty, double tolerance,
                         Provenance prov = {});
VerificationReport diagnostic(std::string name, double theory, double estimate, double uncertainty,
                              Provenance prov = {});

Provenance provenance_of(const EnsembleResult& e, std::int64_t n);

// Moment helpers --------------------------------------------------------------

struct SampleMoments {
    std::size_t count = 0;
    double mean = 0.0;
    double variance = 0.0;         ///< unbiased
    double excess_kurtosis = 0.0;  ///< population moments
    double stderr_mean() const;
    double stderr_variance() const;
};

SampleMoments moments(std::span<const double> xs);

// Verifiers -------------------------------------------------------------------

struct CltTolerance {
    double variance_rel = 0.05;
    double kurtosis_abs = 0.15;
    double mean_se = 4.0;  ///< multiples of the standard error
};

/// Diffusive regime: W = sqrt(n) S_n/n against Var(W) = 2/(11-16p).
std::vector<VerificationReport> clt_check(const EnsembleResult& e, std::int64_t n, CltTolerance tol = {});

/// Thresholds: W = sqrt(n/ln n) (S_n/n - Lambda-hat) against sigma2. At p3
/// the comparison is made separately on each branch and reported as
/// DIAGNOSTIC.
std::vector<VerificationReport> critical_clt_check(const EnsembleResult& e, std::int64_t n,
                                                   double variance_rel = 0.35);

struct SuperdiffusiveTolerance {
    double fluctuation_slope_abs = 0.1;
    double variance_slope_abs = 0.1;
};

/// Fluctuation decay slope against -2 y_p; on (11/16, 7/8) also the Var(S_n)
/// growth slope against 2 - 2 y_p.
std::vector<VerificationReport> superdiffusive_fit(const EnsembleResult& e, SuperdiffusiveTolerance tol = {},
                                                   FitWindow window = {});

struct BallisticTolerance {
    double epsilon = 0.05;
    double min_fraction = 0.90;
    double sign_split_abs = 0.045;
    double mean_abs = 0.06;
};

/// Fraction of replicas with | |S_n/n| - c_p | <= epsilon, sign split and
/// ensemble mean of S_n/n.
std::vector<VerificationReport> ballistic_check(const EnsembleResult& e, std::int64_t n,
                                                BallisticTolerance tol = {});

/// Exponent fit as a report against conjectured_variance_exponent(p).
VerificationReport variance_exponent_check(const EnsembleResult& e, double tolerance, FitWindow window = {});

struct PathEnsembleSpec {
    double p = 0.5;
    std::int64_t n = 0;
    std::int64_t replicas = 1;
    SeedSpec seed{};
    unsigned threads = 0;
};

/// Replica mean of the quadratic strong law statistic against sigma1 (or
/// sigma2 with the critical scaling at the thresholds). For p > 7/8 the branch
/// comes from a first pass and the sums from an exact replay.
VerificationReport qsl_average(const PathEnsembleSpec& spec, double relative_tolerance);

/// Replica median of the running iterated-log maximum, reported against
/// sqrt(sigma1) or sqrt(sigma2). Always DIAGNOSTIC.
VerificationReport lil_diagnostic(const PathEnsembleSpec& spec);

/// Number of indices n >= 1 with S_n = 0 up to the trajectory's last
/// checkpoint.
std::int64_t returns_count(const Trajectory& t);

/// Median return counts at two horizons and the fraction of replicas whose
/// count did not change between them. DIAGNOSTIC rows.
std::vector<VerificationReport> returns_diagnostic(const EnsembleResult& e, std::int64_t n_early,
                                                   std::int64_t n_late);

/// Mean and variance of R - B after n draws against S_{n+2}, within
/// `se_multiple` pooled standard errors.
std::vector<VerificationReport> urn_embedding_test(double p, std::int64_t n, std::int64_t replicas, SeedSpec seed,
                                                   double se_multiple = 4.0, unsigned threads = 0);

// Sampler equivalence -------------------------------------------------------------

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
};

/// Homogeneity test of two samples over the same categories; categories
/// empty in both samples are dropped.
ChiSquareResult chi_square_homogeneity(std::span<const std::int64_t> a, std::span<const std::int64_t> b);

/// Draws `draws` next steps from `state` with step_literal and with
/// step_fast (independent streams of `seed`) and compares the counts.
ChiSquareResult sampler_equivalence(MemoryParam p, const WalkState& state, std::int64_t draws, SeedSpec seed);

}  // namespace memwalk
