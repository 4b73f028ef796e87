#pragma once

// Named verification suites with scale presets. Every size and tolerance a
// suite uses is a field of SuiteConfig.

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "memwalk/stats.hpp"

namespace memwalk {

struct SuiteConfig {
    std::string preset = "desk";
    std::uint64_t seed = 20240611;
    unsigned threads = 0;

    // exact
    int exact_grid = 200;
    int decomposition_grid = 50;
    int quadrature_grid = 20;
    double zero_tol = 1e-12;
    double newton_tol = 1e-10;
    double eigen_tol = 1e-10;
    double quadrature_tol = 1e-8;
    double increment_tol = 1e-14;

    // diffusive
    std::int64_t clt_n = 10'000;
    std::int64_t clt_replicas = 20'000;
    CltTolerance clt_tol{};
    std::int64_t qsl_n = 1'000'000;
    std::int64_t qsl_paths = 100;
    double qsl_rel = 0.15;
    std::int64_t lil_n = 1'000'000;
    std::int64_t lil_paths = 100;
    std::int64_t returns_early = 10'000;
    std::int64_t returns_late = 1'000'000;
    std::int64_t returns_replicas = 200;

    // critical
    std::int64_t critical_n = 1'000'000;
    std::int64_t critical_replicas = 1'000;
    double critical_rel = 0.35;
    std::int64_t upper_critical_n = 1'000'000;
    std::int64_t upper_critical_replicas = 400;

    // superdiffusive
    int superdiffusive_lo_exp = 12;
    int superdiffusive_hi_exp = 20;
    std::int64_t superdiffusive_replicas = 2'000;
    SuperdiffusiveTolerance superdiffusive_tol{};
    int erw_hi_exp = 16;
    std::int64_t erw_replicas = 10'000;
    double erw_slope_tol = 0.05;

    // ballistic
    std::int64_t ballistic_n = 100'000;
    std::int64_t ballistic_replicas = 2'000;
    BallisticTolerance ballistic_tol{};
    double ballistic_slope_tol = 0.05;

    // urn and samplers
    std::int64_t urn_n = 1'000;
    std::int64_t urn_replicas = 10'000;
    double urn_se_multiple = 4.0;
    std::int64_t sampler_draws = 1'000'000;
    double sampler_min_p_value = 1e-3;

    // ode
    double ode_T = 200.0;
    double ode_dt = 0.01;
    int ode_grid = 20;
    double ode_distance = 1e-6;
};

/// "smoke" (seconds, widened tolerances), "desk" (the reference sizes) or
/// "deep" (ten times the replicas). Throws std::invalid_argument otherwise.
SuiteConfig preset_config(std::string_view preset);

/// Overrides one numeric field by name: the member names above, with the
/// nested tolerances flattened as clt_variance_rel, clt_kurtosis_abs,
/// clt_mean_se, superdiffusive_fluctuation_slope_abs,
/// superdiffusive_variance_slope_abs, ballistic_epsilon,
/// ballistic_min_fraction, ballistic_sign_split_abs and ballistic_mean_abs.
/// Returns false for an unknown name.
bool set_suite_field(SuiteConfig& config, std::string_view name, double value);
std::vector<std::string> suite_field_names();

/// A named claim with the rows that support it; it holds when no row FAILs.
struct Check {
    std::string title;
    std::vector<VerificationReport> rows;
    bool passed() const;
};

const std::vector<std::string>& suite_names();

using CheckSink = std::function<void(const Check&)>;

/// Runs one suite ("all" runs every suite in order). Each finished check is
/// also handed to `sink` when given. Throws std::invalid_argument for an
/// unknown suite name.
std::vector<Check> run_suite(std::string_view name, const SuiteConfig& config, const CheckSink& sink = {});

// Individual checks, exposed so tests can run them one at a time.
Check check_drift_zeros(const SuiteConfig& c);
Check check_eigenstructure(const SuiteConfig& c);
Check check_sigma1_quadrature(const SuiteConfig& c);
Check check_increment_moments(const SuiteConfig& c);
Check check_clt(const SuiteConfig& c, double p);
Check check_qsl(const SuiteConfig& c, double p);
Check check_lil(const SuiteConfig& c, double p);
Check check_returns(const SuiteConfig& c, double p);
Check check_lower_critical(const SuiteConfig& c);
Check check_upper_critical(const SuiteConfig& c);
Check check_superdiffusive(const SuiteConfig& c, double p);
Check check_erw_baseline(const SuiteConfig& c, double p);
Check check_ballistic(const SuiteConfig& c, double p);
Check check_urn_embedding(const SuiteConfig& c);
Check check_sampler_equivalence(const SuiteConfig& c);
Check check_ode_basins(const SuiteConfig& c, double p);

}  // namespace memwalk
