#include "memwalk/suites.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "memwalk/dynamics.hpp"

namespace memwalk {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

SeedSpec seed_for(const SuiteConfig& c, std::uint64_t salt) { return SeedSpec{mix64(c.seed + salt)}; }

std::string with_p(std::string_view base, double p) {
    std::ostringstream os;
    os << base << " at p=" << p;
    return os.str();
}

std::vector<std::int64_t> checkpoints_up_to(std::int64_t n) {
    std::vector<std::int64_t> cps = default_checkpoints(n);
    if (cps.back() != n) cps.push_back(n);
    return cps;
}

EnsembleResult run(const SuiteConfig& c, double p, std::vector<std::int64_t> checkpoints, std::int64_t replicas,
                   std::uint64_t salt, Model model = Model::TwoChannel) {
    EnsembleSpec s;
    s.p = p;
    s.n_max = checkpoints.back();
    s.checkpoints = std::move(checkpoints);
    s.replicas = replicas;
    s.seed = seed_for(c, salt);
    s.threads = c.threads;
    s.options.model = model;
    return ensemble_run(s);
}

Provenance exact_provenance(double p = 0.0) { return {0, 0, 0, p}; }

double eigen_residual(const Mat2& j, double lambda, Vec2 nu) { return norm(j * nu - lambda * nu); }

}  // namespace

bool Check::passed() const {
    return std::all_of(rows.begin(), rows.end(), [](const VerificationReport& r) { return r.passed(); });
}

SuiteConfig preset_config(std::string_view preset) {
    SuiteConfig c;
    if (preset == "desk") return c;
    if (preset == "deep") {
        c.preset = "deep";
        c.clt_replicas *= 10;
        c.qsl_paths *= 10;
        c.lil_paths *= 10;
        c.returns_replicas *= 10;
        c.critical_replicas *= 10;
        c.upper_critical_replicas *= 10;
        c.superdiffusive_hi_exp = 22;
        c.superdiffusive_replicas *= 10;
        c.erw_hi_exp = 20;
        c.erw_replicas *= 10;
        c.ballistic_replicas *= 10;
        c.urn_replicas *= 10;
        c.sampler_draws *= 10;
        return c;
    }
    if (preset == "smoke") {
        c.preset = "smoke";
        c.clt_n = 2'000;
        c.clt_replicas = 2'000;
        c.clt_tol = {0.2, 0.5, 4.0};
        c.qsl_n = 100'000;
        c.qsl_paths = 20;
        c.qsl_rel = 0.5;
        c.lil_n = 100'000;
        c.lil_paths = 20;
        c.returns_early = 1'000;
        c.returns_late = 100'000;
        c.returns_replicas = 50;
        c.critical_n = 100'000;
        c.critical_replicas = 200;
        c.critical_rel = 0.6;
        c.upper_critical_n = 100'000;
        c.upper_critical_replicas = 100;
        c.superdiffusive_lo_exp = 10;
        c.superdiffusive_hi_exp = 15;
        c.superdiffusive_replicas = 300;
        c.superdiffusive_tol = {0.3, 0.3};
        c.erw_hi_exp = 13;
        c.erw_replicas = 1'000;
        c.erw_slope_tol = 0.2;
        c.ballistic_n = 20'000;
        c.ballistic_replicas = 300;
        c.ballistic_tol = {0.05, 0.6, 0.15, 0.2};
        c.ballistic_slope_tol = 0.2;
        c.urn_n = 200;
        c.urn_replicas = 2'000;
        c.sampler_draws = 100'000;
        c.ode_grid = 6;
        return c;
    }
    throw std::invalid_argument("unknown preset '" + std::string(preset) + "' (expected smoke, desk or deep)");
}

namespace {

using FieldSetter = void (*)(SuiteConfig&, double);

#define MEMWALK_FIELD(name, member)                                                     \
    {                                                                                   \
        name, [](SuiteConfig& c, double v) { c.member = static_cast<decltype(c.member)>(v); } \
    }

const std::vector<std::pair<std::string_view, FieldSetter>>& field_table() {
    static const std::vector<std::pair<std::string_view, FieldSetter>> table{
        MEMWALK_FIELD("seed", seed),
        MEMWALK_FIELD("threads", threads),
        MEMWALK_FIELD("exact_grid", exact_grid),
        MEMWALK_FIELD("decomposition_grid", decomposition_grid),
        MEMWALK_FIELD("quadrature_grid", quadrature_grid),
        MEMWALK_FIELD("zero_tol", zero_tol),
        MEMWALK_FIELD("newton_tol", newton_tol),
        MEMWALK_FIELD("eigen_tol", eigen_tol),
        MEMWALK_FIELD("quadrature_tol", quadrature_tol),
        MEMWALK_FIELD("increment_tol", increment_tol),
        MEMWALK_FIELD("clt_n", clt_n),
        MEMWALK_FIELD("clt_replicas", clt_replicas),
        MEMWALK_FIELD("clt_variance_rel", clt_tol.variance_rel),
        MEMWALK_FIELD("clt_kurtosis_abs", clt_tol.kurtosis_abs),
        MEMWALK_FIELD("clt_mean_se", clt_tol.mean_se),
        MEMWALK_FIELD("qsl_n", qsl_n),
        MEMWALK_FIELD("qsl_paths", qsl_paths),
        MEMWALK_FIELD("qsl_rel", qsl_rel),
        MEMWALK_FIELD("lil_n", lil_n),
        MEMWALK_FIELD("lil_paths", lil_paths),
        MEMWALK_FIELD("returns_early", returns_early),
        MEMWALK_FIELD("returns_late", returns_late),
        MEMWALK_FIELD("returns_replicas", returns_replicas),
        MEMWALK_FIELD("critical_n", critical_n),
        MEMWALK_FIELD("critical_replicas", critical_replicas),
        MEMWALK_FIELD("critical_rel", critical_rel),
        MEMWALK_FIELD("upper_critical_n", upper_critical_n),
        MEMWALK_FIELD("upper_critical_replicas", upper_critical_replicas),
        MEMWALK_FIELD("superdiffusive_lo_exp", superdiffusive_lo_exp),
        MEMWALK_FIELD("superdiffusive_hi_exp", superdiffusive_hi_exp),
        MEMWALK_FIELD("superdiffusive_replicas", superdiffusive_replicas),
        MEMWALK_FIELD("superdiffusive_fluctuation_slope_abs", superdiffusive_tol.fluctuation_slope_abs),
        MEMWALK_FIELD("superdiffusive_variance_slope_abs", superdiffusive_tol.variance_slope_abs),
        MEMWALK_FIELD("erw_hi_exp", erw_hi_exp),
        MEMWALK_FIELD("erw_replicas", erw_replicas),
        MEMWALK_FIELD("erw_slope_tol", erw_slope_tol),
        MEMWALK_FIELD("ballistic_n", ballistic_n),
        MEMWALK_FIELD("ballistic_replicas", ballistic_replicas),
        MEMWALK_FIELD("ballistic_epsilon", ballistic_tol.epsilon),
        MEMWALK_FIELD("ballistic_min_fraction", ballistic_tol.min_fraction),
        MEMWALK_FIELD("ballistic_sign_split_abs", ballistic_tol.sign_split_abs),
        MEMWALK_FIELD("ballistic_mean_abs", ballistic_tol.mean_abs),
        MEMWALK_FIELD("ballistic_slope_tol", ballistic_slope_tol),
        MEMWALK_FIELD("urn_n", urn_n),
        MEMWALK_FIELD("urn_replicas", urn_replicas),
        MEMWALK_FIELD("urn_se_multiple", urn_se_multiple),
        MEMWALK_FIELD("sampler_draws", sampler_draws),
        MEMWALK_FIELD("sampler_min_p_value", sampler_min_p_value),
        MEMWALK_FIELD("ode_T", ode_T),
        MEMWALK_FIELD("ode_dt", ode_dt),
        MEMWALK_FIELD("ode_grid", ode_grid),
        MEMWALK_FIELD("ode_distance", ode_distance),
    };
    return table;
}

#undef MEMWALK_FIELD

}  // namespace

bool set_suite_field(SuiteConfig& c, std::string_view name, double value) {
    for (const auto& [key, set] : field_table()) {
        if (key == name) {
            set(c, value);
            return true;
        }
    }
    return false;
}

std::vector<std::string> suite_field_names() {
    std::vector<std::string> out;
    for (const auto& entry : field_table()) out.emplace_back(entry.first);
    return out;
}

// Exact checks -----------------------------------------------------------------

Check check_drift_zeros(const SuiteConfig& c) {
    double h_sym = 0.0, h_ball = 0.0, newton_dist = 0.0;
    std::int64_t mismatches = 0;
    for (int i = 0; i < c.exact_grid; ++i) {
        const double p = (i + 0.5) / c.exact_grid;
        if (thresholds::is_p2(p)) continue;
        const MemoryParam mp(p);
        h_sym = std::max(h_sym, norm(drift(mp, kSymmetricZero)));
        if (p > thresholds::kP2)
            for (Branch b : {Branch::Plus, Branch::Minus}) h_ball = std::max(h_ball, norm(drift(mp, ballistic_zero(mp, b))));

        const auto closed = fixed_points(mp);
        const auto found = newton_fixed_points(mp);
        if (found.size() != closed.size()) ++mismatches;
        for (const auto& r : found) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& z : closed) best = std::min(best, norm(r.vec() - z.location.vec()));
            newton_dist = std::max(newton_dist, best);
        }
    }
    return {"drift zeros: closed forms and Newton oracle",
            {judge("zeros.max_drift_at_symmetric", 0.0, h_sym, 0.0, c.zero_tol, exact_provenance()),
             judge("zeros.max_drift_at_ballistic", 0.0, h_ball, 0.0, c.zero_tol, exact_provenance()),
             judge("zeros.newton_count_mismatches", 0.0, static_cast<double>(mismatches), 0.0, 0.0,
                   exact_provenance()),
             judge("zeros.newton_max_distance", 0.0, newton_dist, 0.0, c.newton_tol, exact_provenance())}};
}

Check check_eigenstructure(const SuiteConfig& c) {
    double residual = 0.0;
    for (int i = 0; i < c.exact_grid; ++i) {
        const double p = (i + 0.5) / c.exact_grid;
        if (thresholds::is_p2(p)) continue;
        const MemoryParam mp(p);
        for (const auto& fp : fixed_points(mp)) {
            const Mat2 j = jacobian(mp, fp.location);
            residual = std::max({residual, eigen_residual(j, fp.lambda1, fp.nu1), eigen_residual(j, fp.lambda2, fp.nu2)});
        }
    }

    const MemoryParam p1(thresholds::kP1);
    const MemoryParam p3(thresholds::kP3);
    const double lam_sym = eigen_at(p1, SimplexPoint(kSymmetricZero)).lambda1;
    // Report the branch further from -1/2.
    const double lam_plus = eigen_at(p3, ballistic_zero(p3, Branch::Plus)).lambda1;
    const double lam_minus = eigen_at(p3, ballistic_zero(p3, Branch::Minus)).lambda1;
    const double lam_ball = std::abs(lam_plus + 0.5) >= std::abs(lam_minus + 0.5) ? lam_plus : lam_minus;

    double sum_err = 0.0, recon_err = 0.0;
    for (int i = 0; i < c.decomposition_grid; ++i) {
        const MemoryParam mp(thresholds::kP2 + (1.0 - thresholds::kP2) * (i + 0.5) / c.decomposition_grid);
        for (Branch b : {Branch::Plus, Branch::Minus}) {
            const AlphaBeta ab = alpha_beta(mp, b);
            const EigenData e = eigen_at(mp, ballistic_zero(mp, b));
            sum_err = std::max(sum_err, std::abs(ab.alpha + ab.beta - 1.0));
            recon_err = std::max(recon_err, norm(ab.alpha * e.nu1 + ab.beta * e.nu2 - Vec2{1.0, -1.0}));
        }
    }
    return {"eigenstructure at the zeros and the (1,-1) decomposition",
            {judge("eigen.max_residual", 0.0, residual, 0.0, c.eigen_tol, exact_provenance()),
             judge("eigen.lambda1_symmetric_at_p1", -0.5, lam_sym, 0.0, 0.0, exact_provenance(thresholds::kP1)),
             judge("eigen.lambda1_ballistic_at_p3", -0.5, lam_ball, 0.0, c.eigen_tol,
                   exact_provenance(thresholds::kP3)),
             judge("decomposition.alpha_plus_beta", 1.0, 1.0 + sum_err, 0.0,
                   std::numeric_limits<double>::epsilon(), exact_provenance()),
             judge("decomposition.reconstruction_error", 0.0, recon_err, 0.0, c.eigen_tol, exact_provenance())}};
}

Check check_sigma1_quadrature(const SuiteConfig& c) {
    double worst = 0.0;
    for (int i = 0; i < c.quadrature_grid; ++i) {
        const MemoryParam mp(thresholds::kP3 + (1.0 - thresholds::kP3) * (i + 0.5) / c.quadrature_grid);
        for (Branch b : {Branch::Plus, Branch::Minus})
            worst = std::max(worst, std::abs(sigma1(mp, b) - sigma1_by_quadrature(mp, b)));
    }
    return {"ballistic CLT variance: Lyapunov solve against quadrature",
            {judge("sigma1.lyapunov_minus_quadrature", 0.0, worst, 0.0, c.quadrature_tol, exact_provenance())}};
}

Check check_increment_moments(const SuiteConfig& c) {
    std::vector<std::pair<double, SimplexPoint>> cases;
    for (double p : {0.2, 0.5, 0.6, 0.7, 0.8, 0.95})
        cases.emplace_back(p, SimplexPoint(kSymmetricZero));
    for (double p : {0.88, 0.9, 0.95, thresholds::kP3, 0.99}) {
        cases.emplace_back(p, ballistic_zero(MemoryParam(p), Branch::Plus));
        cases.emplace_back(p, ballistic_zero(MemoryParam(p), Branch::Minus));
    }
    double mean_err = 0.0, cov_err = 0.0;
    for (const auto& [p, g] : cases) {
        const MemoryParam mp(p);
        const StepDistribution law = channel_step_law(mp, g.vec());
        const Vec2 q{law.q_plus, law.q_minus};
        // Indicator of the next step's type minus the current fractions.
        mean_err = std::max(mean_err, norm(q - g.vec() - drift(mp, g)));
        const Mat2 cov{q.x1 - q.x1 * q.x1, -q.x1 * q.x2, -q.x1 * q.x2, q.x2 - q.x2 * q.x2};
        cov_err = std::max(cov_err, max_abs_entry(cov - noise_cov(g).matrix));
    }
    return {"one-step increment moments at the zeros",
            {judge("increments.mean_minus_drift", 0.0, mean_err, 0.0, c.increment_tol, exact_provenance()),
             judge("increments.covariance_minus_noise", 0.0, cov_err, 0.0, c.increment_tol, exact_provenance())}};
}

// Monte Carlo checks -------------------------------------------------------------

Check check_clt(const SuiteConfig& c, double p) {
    const auto e = run(c, p, {c.clt_n}, c.clt_replicas, 1);
    return {with_p("diffusive CLT variance", p), clt_check(e, c.clt_n, c.clt_tol)};
}

Check check_qsl(const SuiteConfig& c, double p) {
    return {with_p("quadratic strong law", p),
            {qsl_average({p, c.qsl_n, c.qsl_paths, seed_for(c, 2), c.threads}, c.qsl_rel)}};
}

Check check_lil(const SuiteConfig& c, double p) {
    return {with_p("iterated-log running maximum (diagnostic)", p),
            {lil_diagnostic({p, c.lil_n, c.lil_paths, seed_for(c, 3), c.threads})}};
}

Check check_returns(const SuiteConfig& c, double p) {
    const auto e = run(c, p, {c.returns_early, c.returns_late}, c.returns_replicas, 4);
    return {with_p("returns to the origin (diagnostic)", p), returns_diagnostic(e, c.returns_early, c.returns_late)};
}

Check check_lower_critical(const SuiteConfig& c) {
    const auto e = run(c, thresholds::kP1, {c.critical_n}, c.critical_replicas, 5);
    return {"critical CLT at p=11/16", critical_clt_check(e, c.critical_n, c.critical_rel)};
}

Check check_upper_critical(const SuiteConfig& c) {
    const auto e = run(c, thresholds::kP3, {c.upper_critical_n}, c.upper_critical_replicas, 6);
    return {"critical CLT at p=p3 per branch (diagnostic)",
            critical_clt_check(e, c.upper_critical_n, c.critical_rel)};
}

Check check_superdiffusive(const SuiteConfig& c, double p) {
    const auto e = run(c, p, geometric_checkpoints(c.superdiffusive_lo_exp, c.superdiffusive_hi_exp),
                       c.superdiffusive_replicas, 7);
    return {with_p("superdiffusive exponents", p), superdiffusive_fit(e, c.superdiffusive_tol)};
}

Check check_erw_baseline(const SuiteConfig& c, double p) {
    const auto e = run(c, p, geometric_checkpoints(7, c.erw_hi_exp), c.erw_replicas, 8, Model::Erw);
    return {with_p("classical ERW variance exponent", p), {variance_exponent_check(e, c.erw_slope_tol)}};
}

Check check_ballistic(const SuiteConfig& c, double p) {
    const auto e = run(c, p, checkpoints_up_to(c.ballistic_n), c.ballistic_replicas, 9);
    auto rows = ballistic_check(e, c.ballistic_n, c.ballistic_tol);
    rows.push_back(variance_exponent_check(e, c.ballistic_slope_tol));
    return {with_p("ballistic speed, symmetry and growth", p), std::move(rows)};
}

Check check_urn_embedding(const SuiteConfig& c) {
    Check out{"urn embedding: R-B against the walk", {}};
    std::uint64_t salt = 10;
    for (double p : {0.5, 0.8, 0.95}) {
        auto rows = urn_embedding_test(p, c.urn_n, c.urn_replicas, seed_for(c, salt++), c.urn_se_multiple, c.threads);
        out.rows.insert(out.rows.end(), rows.begin(), rows.end());
    }
    return out;
}

Check check_sampler_equivalence(const SuiteConfig& c) {
    const std::vector<WalkState> states{{10, 3, 4}, {100, 90, 5}, {1000, 1, 2}, {57, 20, 20}};
    Check out{"literal and fast samplers agree (chi-square)", {}};
    std::uint64_t salt = 20;
    for (double p : {0.3, 0.5, 0.7, 0.8, 0.95}) {
        for (const auto& s : states) {
            const auto r = sampler_equivalence(MemoryParam(p), s, c.sampler_draws, seed_for(c, salt++));
            std::ostringstream name;
            name << "sampler.chi2_p_value[p=" << p << ",n=" << s.n << ",plus=" << s.n_plus << ",minus=" << s.n_minus
                 << "]";
            // PASS iff p_value >= the threshold.
            out.rows.push_back(judge(name.str(), 1.0, r.p_value, kNaN, 1.0 - c.sampler_min_p_value,
                                     {seed_for(c, salt - 1).master_seed, c.sampler_draws, s.n, p}));
        }
    }
    return out;
}

Check check_ode_basins(const SuiteConfig& c, double p) {
    const MemoryParam mp(p);
    const auto scan = basin_scan(mp, basin_grid(c.ode_grid), c.ode_T, c.ode_dt);
    const bool ballistic = p > thresholds::kP2;
    std::int64_t hits = 0;
    double worst = 0.0;
    for (const auto& b : scan) {
        const auto& t = b.trajectory;
        const bool target = ballistic
                                ? (t.nearest_kind == FixedPointKind::Plus || t.nearest_kind == FixedPointKind::Minus)
                                : t.nearest_kind == FixedPointKind::Symmetric;
        const double d = target ? t.distance : std::numeric_limits<double>::infinity();
        worst = std::max(worst, d);
        if (d <= c.ode_distance) ++hits;
    }
    const double frac = static_cast<double>(hits) / static_cast<double>(scan.size());
    const Provenance prov{0, static_cast<std::int64_t>(scan.size()), 0, p};
    const char* base = ballistic ? "ode.fraction_to_ballistic_zeros" : "ode.fraction_to_symmetric_zero";
    return {with_p("ODE basins of the stable zeros", p),
            {judge(base, 1.0, frac, 0.0, 0.0, prov),
             judge("ode.max_terminal_distance", 0.0, worst, 0.0, c.ode_distance, prov)}};
}

// Suites -----------------------------------------------------------------------------

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"exact",          "diffusive", "critical", "superdiffusive",
                                                "ballistic",      "urn",       "ode",      "all"};
    return names;
}

std::vector<Check> run_suite(std::string_view name, const SuiteConfig& c, const CheckSink& sink) {
    std::vector<Check> out;
    auto add = [&](Check check) {
        if (sink) sink(check);
        out.push_back(std::move(check));
    };
    const bool all = name == "all";
    bool known = all;
    if (all || name == "exact") {
        known = true;
        add(check_drift_zeros(c));
        add(check_eigenstructure(c));
        add(check_sigma1_quadrature(c));
        add(check_increment_moments(c));
    }
    if (all || name == "diffusive") {
        known = true;
        add(check_clt(c, 0.5));
        add(check_clt(c, 0.6));
        add(check_qsl(c, 0.5));
        add(check_lil(c, 0.5));
        add(check_returns(c, 0.5));
    }
    if (all || name == "critical") {
        known = true;
        add(check_lower_critical(c));
        add(check_upper_critical(c));
    }
    if (all || name == "superdiffusive") {
        known = true;
        add(check_superdiffusive(c, 0.8));
        add(check_erw_baseline(c, 0.6));
    }
    if (all || name == "ballistic") {
        known = true;
        add(check_ballistic(c, 0.95));
        add(check_returns(c, 0.95));
    }
    if (all || name == "urn") {
        known = true;
        add(check_urn_embedding(c));
        add(check_sampler_equivalence(c));
    }
    if (all || name == "ode") {
        known = true;
        add(check_ode_basins(c, 0.6));
        add(check_ode_basins(c, 0.95));
    }
    if (!known) throw std::invalid_argument("unknown suite '" + std::string(name) + "'");
    return out;
}

}  // namespace memwalk
