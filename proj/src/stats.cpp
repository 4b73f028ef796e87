#include "memwalk/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

namespace memwalk {

namespace {

double median(std::vector<double> xs) {
    if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
    const std::size_t mid = xs.size() / 2;
    std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid), xs.end());
    double m = xs[mid];
    if (xs.size() % 2 == 0) {
        const double lower = *std::max_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid));
        m = 0.5 * (m + lower);
    }
    return m;
}

[[noreturn]] void regime_mismatch(const char* what, double p) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": p = " << p << " is outside this verifier's regime";
    throw RegimeError(os.str());
}

std::string tagged(std::string_view base, double p) {
    std::ostringstream os;
    os << base << "[p=" << p << "]";
    return os.str();
}

Branch branch_of(double center) { return center >= 0.0 ? Branch::Plus : Branch::Minus; }

}  // namespace

// ---------------------------------------------------------------------------

ExponentFit fit_loglog(std::span<const std::int64_t> n, std::span<const double> y, FitWindow window) {
    if (n.size() != y.size()) throw std::invalid_argument("fit_loglog: size mismatch");
    std::vector<std::size_t> idx;
    if (window.n_lo || window.n_hi) {
        for (std::size_t i = 0; i < n.size(); ++i) {
            if (window.n_lo && n[i] < *window.n_lo) continue;
            if (window.n_hi && n[i] > *window.n_hi) continue;
            idx.push_back(i);
        }
    } else {
        const std::size_t take = std::max<std::size_t>(4, (n.size() + 1) / 2);
        for (std::size_t i = n.size() > take ? n.size() - take : 0; i < n.size(); ++i) idx.push_back(i);
    }
    if (idx.size() < 4) throw std::invalid_argument("fit_loglog: need at least 4 points in the fit window");

    std::vector<double> lx, ly;
    for (auto i : idx) {
        if (!(y[i] > 0.0)) throw std::domain_error("fit_loglog: non-positive value (degenerate variance)");
        lx.push_back(std::log(static_cast<double>(n[i])));
        ly.push_back(std::log(y[i]));
    }
    const double m = static_cast<double>(lx.size());
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / m;
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    ExponentFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
        ss_res += r * r;
    }
    fit.stderr_slope = std::sqrt(ss_res / (m - 2.0) / sxx);
    fit.r2 = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    fit.n_lo = n[idx.front()];
    fit.n_hi = n[idx.back()];
    fit.points = idx.size();
    return fit;
}

ExponentFit variance_exponent(const EnsembleResult& e, FitWindow window) {
    std::vector<std::int64_t> n;
    std::vector<double> v;
    for (const auto& c : e.summary) {
        n.push_back(c.n);
        v.push_back(c.var_S);
    }
    return fit_loglog(n, v, window);
}

ExponentFit fluctuation_exponent(const EnsembleResult& e, std::span<const double> centers,
                                 const std::vector<bool>& included, FitWindow window) {
    std::vector<std::int64_t> n;
    std::vector<double> v;
    for (std::size_t c = 0; c < e.spec.checkpoints.size(); ++c) {
        std::vector<double> dev;
        for (std::size_t i = 0; i < e.paths.size(); ++i) {
            if (!included[i]) continue;
            const auto& r = e.paths[i].records[c];
            dev.push_back(static_cast<double>(r.position) / static_cast<double>(r.n) - centers[i]);
        }
        n.push_back(e.spec.checkpoints[c]);
        v.push_back(moments(dev).variance);
    }
    return fit_loglog(n, v, window);
}

BranchAssignment assign_branches(const EnsembleResult& e, double speed) {
    BranchAssignment out;
    out.centers.reserve(e.paths.size());
    for (const auto& t : e.paths) {
        const auto s = t.final_record().position;
        out.centers.push_back(s > 0 ? speed : (s < 0 ? -speed : 0.0));
        out.included.push_back(s != 0);
        if (s == 0) ++out.excluded;
    }
    return out;
}

BranchAssignment no_branches(std::size_t replicas) {
    return {std::vector<double>(replicas, 0.0), std::vector<bool>(replicas, true), 0};
}

// ---------------------------------------------------------------------------

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "PASS";
        case Verdict::Fail: return "FAIL";
        case Verdict::Diagnostic: return "DIAGNOSTIC";
    }
    return "?";
}

VerificationReport judge(std::string name, double theory, double estimate, double uncertainty, double tolerance,
                         Provenance prov) {
    const bool ok = std::abs(estimate - theory) <= tolerance;
    return {std::move(name), theory, estimate, uncertainty, tolerance, ok ? Verdict::Pass : Verdict::Fail, prov};
}

VerificationReport diagnostic(std::string name, double theory, double estimate, double uncertainty,
                              Provenance prov) {
    return {std::move(name), theory, estimate, uncertainty, std::numeric_limits<double>::quiet_NaN(),
            Verdict::Diagnostic, prov};
}

Provenance provenance_of(const EnsembleResult& e, std::int64_t n) {
    return {e.spec.seed.master_seed, e.spec.replicas, n, e.spec.p};
}

double SampleMoments::stderr_mean() const { return std::sqrt(variance / static_cast<double>(count)); }

double SampleMoments::stderr_variance() const {
    return variance * std::sqrt(std::max(0.0, excess_kurtosis + 2.0) / static_cast<double>(count));
}

SampleMoments moments(std::span<const double> xs) {
    SampleMoments m;
    m.count = xs.size();
    if (xs.empty()) return m;
    const double nd = static_cast<double>(xs.size());
    m.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / nd;
    double s2 = 0.0, s4 = 0.0;
    for (double x : xs) {
        const double d2 = (x - m.mean) * (x - m.mean);
        s2 += d2;
        s4 += d2 * d2;
    }
    m.variance = xs.size() > 1 ? s2 / (nd - 1.0) : 0.0;
    const double pm2 = s2 / nd;
    m.excess_kurtosis = pm2 > 0.0 ? (s4 / nd) / (pm2 * pm2) - 3.0 : 0.0;
    return m;
}

// ---------------------------------------------------------------------------

std::vector<VerificationReport> clt_check(const EnsembleResult& e, std::int64_t n, CltTolerance tol) {
    const double p = e.spec.p;
    if (!(p < thresholds::kP1)) regime_mismatch("clt_check", p);
    const auto cp = e.checkpoint_index(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<double> w = e.positions(cp);
    for (auto& x : w) x *= scale;
    const SampleMoments m = moments(w);
    const double theory = sigma1(MemoryParam(p));
    const auto prov = provenance_of(e, n);
    return {
        judge(tagged("clt.var_W", p), theory, m.variance, m.stderr_variance(), tol.variance_rel * theory, prov),
        judge(tagged("clt.excess_kurtosis_W", p), 0.0, m.excess_kurtosis, std::sqrt(24.0 / static_cast<double>(m.count)),
              tol.kurtosis_abs, prov),
        judge(tagged("clt.mean_W", p), 0.0, m.mean, m.stderr_mean(), tol.mean_se * m.stderr_mean(), prov),
    };
}

std::vector<VerificationReport> critical_clt_check(const EnsembleResult& e, std::int64_t n, double variance_rel) {
    const double p = e.spec.p;
    const MemoryParam mp(p);
    const auto cp = e.checkpoint_index(n);
    const double nd = static_cast<double>(n);
    const double scale = std::sqrt(nd / std::log(nd));
    const auto prov = provenance_of(e, n);

    if (thresholds::is_p1(p)) {
        std::vector<double> w = e.positions(cp);
        for (auto& x : w) x = scale * x / nd;
        const SampleMoments m = moments(w);
        const double theory = sigma2(mp);
        return {judge(tagged("critical.var_W", p), theory, m.variance, m.stderr_variance(), variance_rel * theory,
                      prov)};
    }
    if (!thresholds::is_p3(p)) regime_mismatch("critical_clt_check", p);

    const BranchAssignment b = assign_branches(e, speed_c(mp));
    std::vector<VerificationReport> out;
    for (Branch br : {Branch::Plus, Branch::Minus}) {
        std::vector<double> w;
        for (std::size_t i = 0; i < e.paths.size(); ++i) {
            if (!b.included[i] || branch_of(b.centers[i]) != br) continue;
            w.push_back(scale * (static_cast<double>(e.paths[i].records[cp].position) / nd - b.centers[i]));
        }
        const SampleMoments m = moments(w);
        const double theory = sigma2(mp, br);
        // The approach to the zero decays like n^(lambda1 + 1/2) = n^0 up to
        // logs here, so desk-scale samples stay dominated by the transient.
        out.push_back(diagnostic(tagged(br == Branch::Plus ? "critical.var_W.gamma_p" : "critical.var_W.gamma_p_bar", p),
                                 theory, m.variance, m.stderr_variance(), prov));
    }
    out.push_back(diagnostic(tagged("critical.excluded_zero_paths", p), 0.0, static_cast<double>(b.excluded), 0.0,
                             prov));
    return out;
}

std::vector<VerificationReport> superdiffusive_fit(const EnsembleResult& e, SuperdiffusiveTolerance tol,
                                                   FitWindow window) {
    const double p = e.spec.p;
    const MemoryParam mp(p);
    const double y = exponent_y(mp);  // throws outside the superdiffusive intervals
    const bool lower = p < thresholds::kP2;
    const BranchAssignment b = lower ? no_branches(e.paths.size()) : assign_branches(e, speed_c(mp));
    const auto prov = provenance_of(e, e.spec.n_max);

    const ExponentFit fluct = fluctuation_exponent(e, b.centers, b.included, window);
    std::vector<VerificationReport> out{judge(tagged("superdiffusive.fluctuation_slope", p), -2.0 * y, fluct.slope,
                                              fluct.stderr_slope, tol.fluctuation_slope_abs, prov)};
    if (lower) {
        const ExponentFit var = variance_exponent(e, window);
        out.push_back(judge(tagged("superdiffusive.variance_slope", p), 2.0 - 2.0 * y, var.slope, var.stderr_slope,
                            tol.variance_slope_abs, prov));
    } else {
        out.push_back(diagnostic(tagged("superdiffusive.excluded_zero_paths", p), 0.0,
                                 static_cast<double>(b.excluded), 0.0, prov));
    }
    return out;
}

std::vector<VerificationReport> ballistic_check(const EnsembleResult& e, std::int64_t n, BallisticTolerance tol) {
    const double p = e.spec.p;
    if (!(p > thresholds::kP2)) regime_mismatch("ballistic_check", p);
    const double c = speed_c(MemoryParam(p));
    const auto cp = e.checkpoint_index(n);
    const double nd = static_cast<double>(n);

    std::vector<double> ratio = e.positions(cp);
    for (auto& x : ratio) x /= nd;
    std::int64_t near = 0, positive = 0, nonzero = 0;
    for (double r : ratio) {
        if (std::abs(std::abs(r) - c) <= tol.epsilon) ++near;
        if (r != 0.0) ++nonzero;
        if (r > 0.0) ++positive;
    }
    const double count = static_cast<double>(ratio.size());
    const double frac = static_cast<double>(near) / count;
    const double split = nonzero > 0 ? static_cast<double>(positive) / static_cast<double>(nonzero) : 0.5;
    const SampleMoments m = moments(ratio);
    const auto prov = provenance_of(e, n);
    return {
        judge(tagged("ballistic.fraction_near_speed", p), 1.0, frac, std::sqrt(frac * (1.0 - frac) / count),
              1.0 - tol.min_fraction, prov),
        judge(tagged("ballistic.sign_split", p), 0.5, split,
              0.5 / std::sqrt(static_cast<double>(std::max<std::int64_t>(nonzero, 1))), tol.sign_split_abs, prov),
        judge(tagged("ballistic.mean_ratio", p), 0.0, m.mean, m.stderr_mean(), tol.mean_abs, prov),
    };
}

VerificationReport variance_exponent_check(const EnsembleResult& e, double tolerance, FitWindow window) {
    const double p = e.spec.p;
    const ExponentFit fit = variance_exponent(e, window);
    double theory;
    if (e.spec.options.model == Model::Erw) {
        // Classical walk: diffusive below 3/4, n^(4p-2) above.
        theory = p < 0.75 ? 1.0 : 4.0 * p - 2.0;
    } else {
        theory = conjectured_variance_exponent(MemoryParam(p));
    }
    const char* base = e.spec.options.model == Model::Erw ? "erw.variance_exponent" : "variance_exponent";
    return judge(tagged(base, p), theory, fit.slope, fit.stderr_slope, tolerance, provenance_of(e, fit.n_hi));
}

// ---------------------------------------------------------------------------

namespace {

struct PathRun {
    EnsembleResult result;
    BranchAssignment branches;
    Scaling scaling;
};

PathRun run_with_online(const PathEnsembleSpec& spec, bool qsl, bool lil) {
    const MemoryParam mp(spec.p);
    const double p = spec.p;
    const bool critical = thresholds::is_p1(p) || thresholds::is_p3(p);

    EnsembleSpec es;
    es.p = p;
    es.n_max = spec.n;
    es.checkpoints = {spec.n};
    es.replicas = spec.replicas;
    es.seed = spec.seed;
    es.threads = spec.threads;

    BranchAssignment branches = no_branches(static_cast<std::size_t>(spec.replicas));
    if (p > thresholds::kP2) {
        // First pass fixes each path's branch from its final sign; the replay
        // below regenerates the identical path with the centre known.
        branches = assign_branches(ensemble_run(es), speed_c(mp));
        es.centers = branches.centers;
    }
    es.options.online = OnlineOptions{qsl, lil, critical ? Scaling::Critical : Scaling::Standard, 0.0};
    return {ensemble_run(es), std::move(branches), es.options.online.scaling};
}

double limit_variance(MemoryParam mp, Branch br) {
    const double p = mp.value();
    if (thresholds::is_p1(p) || thresholds::is_p3(p)) return sigma2(mp, br);
    return sigma1(mp, br);
}

}  // namespace

VerificationReport qsl_average(const PathEnsembleSpec& spec, double relative_tolerance) {
    const double p = spec.p;
    const MemoryParam mp(p);
    const bool standard = p < thresholds::kP1 || (p > thresholds::kP3 && !thresholds::is_p3(p));
    if (!standard && !thresholds::is_p1(p) && !thresholds::is_p3(p)) regime_mismatch("qsl_average", p);

    const PathRun run = run_with_online(spec, true, false);
    std::vector<double> stat;
    double theory = 0.0;
    for (std::size_t i = 0; i < run.result.paths.size(); ++i) {
        if (!run.branches.included[i]) continue;
        stat.push_back(run.result.paths[i].online.qsl);
        theory += limit_variance(mp, branch_of(run.branches.centers[i]));
    }
    theory /= static_cast<double>(stat.size());
    const SampleMoments m = moments(stat);
    return judge(tagged("qsl.mean", p), theory, m.mean, m.stderr_mean(), relative_tolerance * theory,
                 {spec.seed.master_seed, spec.replicas, spec.n, p});
}

VerificationReport lil_diagnostic(const PathEnsembleSpec& spec) {
    const double p = spec.p;
    const MemoryParam mp(p);
    if (!(p < thresholds::kP1) && !thresholds::is_p1(p) && !thresholds::is_p3(p)) regime_mismatch("lil_diagnostic", p);
    if (spec.n < 16) throw std::invalid_argument("lil_diagnostic: the iterated-log scaling needs n >= 16");

    const PathRun run = run_with_online(spec, false, true);
    std::vector<double> maxima;
    double theory = 0.0;
    for (std::size_t i = 0; i < run.result.paths.size(); ++i) {
        if (!run.branches.included[i]) continue;
        maxima.push_back(run.result.paths[i].online.lil_max);
        theory += std::sqrt(limit_variance(mp, branch_of(run.branches.centers[i])));
    }
    theory /= static_cast<double>(maxima.size());
    const SampleMoments m = moments(maxima);
    return diagnostic(tagged("lil.median_running_max", p), theory, median(maxima), std::sqrt(m.variance),
                      {spec.seed.master_seed, spec.replicas, spec.n, p});
}

std::int64_t returns_count(const Trajectory& t) { return t.records.empty() ? 0 : t.final_record().returns; }

std::vector<VerificationReport> returns_diagnostic(const EnsembleResult& e, std::int64_t n_early,
                                                   std::int64_t n_late) {
    const auto a = e.checkpoint_index(n_early);
    const auto b = e.checkpoint_index(n_late);
    const auto early = e.column(a, [](const CheckpointRecord& r) { return static_cast<double>(r.returns); });
    const auto late = e.column(b, [](const CheckpointRecord& r) { return static_cast<double>(r.returns); });
    std::int64_t unchanged = 0;
    for (std::size_t i = 0; i < early.size(); ++i)
        if (early[i] == late[i]) ++unchanged;
    const double p = e.spec.p;
    return {
        diagnostic(tagged("returns.median_early", p), std::numeric_limits<double>::quiet_NaN(), median(early), 0.0,
                   provenance_of(e, n_early)),
        diagnostic(tagged("returns.median_late", p), std::numeric_limits<double>::quiet_NaN(), median(late), 0.0,
                   provenance_of(e, n_late)),
        diagnostic(tagged("returns.fraction_unchanged", p), std::numeric_limits<double>::quiet_NaN(),
                   static_cast<double>(unchanged) / static_cast<double>(early.size()), 0.0,
                   provenance_of(e, n_late)),
    };
}

std::vector<VerificationReport> urn_embedding_test(double p, std::int64_t n, std::int64_t replicas, SeedSpec seed,
                                                   double se_multiple, unsigned threads) {
    if (n < 1) throw std::invalid_argument("urn_embedding_test: n must be >= 1");
    EnsembleSpec walk;
    walk.p = p;
    walk.n_max = n + 2;
    walk.checkpoints = {n + 2};
    walk.replicas = replicas;
    walk.seed = seed;
    walk.threads = threads;
    EnsembleSpec urn = walk;
    urn.options.model = Model::Urn;
    urn.seed = SeedSpec{mix64(seed.master_seed ^ 0x75726e0000000000ULL)};

    const auto w = ensemble_run(walk).positions(0);
    const auto u = ensemble_run(urn).positions(0);
    const SampleMoments mw = moments(w);
    const SampleMoments mu = moments(u);
    const double se_mean = std::hypot(mw.stderr_mean(), mu.stderr_mean());
    const double se_var = std::hypot(mw.stderr_variance(), mu.stderr_variance());
    const Provenance prov{seed.master_seed, replicas, n, p};
    return {
        judge(tagged("urn.mean_R_minus_B", p), mw.mean, mu.mean, se_mean, se_multiple * se_mean, prov),
        judge(tagged("urn.var_R_minus_B", p), mw.variance, mu.variance, se_var, se_multiple * se_var, prov),
    };
}

// ---------------------------------------------------------------------------

ChiSquareResult chi_square_homogeneity(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
    if (a.size() != b.size()) throw std::invalid_argument("chi_square_homogeneity: category mismatch");
    const double na = static_cast<double>(std::accumulate(a.begin(), a.end(), std::int64_t{0}));
    const double nb = static_cast<double>(std::accumulate(b.begin(), b.end(), std::int64_t{0}));
    if (na <= 0.0 || nb <= 0.0) throw std::invalid_argument("chi_square_homogeneity: empty sample");
    const double total = na + nb;
    ChiSquareResult r;
    int used = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double col = static_cast<double>(a[k] + b[k]);
        if (col == 0.0) continue;
        ++used;
        const double ea = na * col / total;
        const double eb = nb * col / total;
        r.statistic += (static_cast<double>(a[k]) - ea) * (static_cast<double>(a[k]) - ea) / ea;
        r.statistic += (static_cast<double>(b[k]) - eb) * (static_cast<double>(b[k]) - eb) / eb;
    }
    r.dof = used - 1;
    r.p_value = r.dof > 0 ? boost::math::gamma_q(0.5 * r.dof, 0.5 * r.statistic) : 1.0;
    return r;
}

ChiSquareResult sampler_equivalence(MemoryParam p, const WalkState& state, std::int64_t draws, SeedSpec seed) {
    std::array<std::int64_t, 3> literal{}, fast{};
    auto bucket = [&](std::array<std::int64_t, 3>& counts, const WalkState& next) {
        if (next.n_plus > state.n_plus) ++counts[0];
        else if (next.n_minus > state.n_minus) ++counts[1];
        else ++counts[2];
    };
    Rng r_literal = seed.stream(0);
    Rng r_fast = seed.stream(1);
    const FastStepper stepper(p);
    for (std::int64_t i = 0; i < draws; ++i) {
        bucket(literal, step_literal(p, state, r_literal));
        WalkState s = state;
        stepper.advance(s, r_fast);
        bucket(fast, s);
    }
    return chi_square_homogeneity(literal, fast);
}

}  // namespace memwalk
