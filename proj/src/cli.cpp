#include "memwalk/cli.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "memwalk/dynamics.hpp"
#include "memwalk/ensemble.hpp"
#include "memwalk/output.hpp"
#include "memwalk/stats.hpp"
#include "memwalk/suites.hpp"

namespace memwalk {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Parsing helpers ------------------------------------------------------------------

double parse_p(const std::string& s) {
    if (s == "p1") return thresholds::kP1;
    if (s == "p2") return thresholds::kP2;
    if (s == "p3") return thresholds::kP3;
    double v = 0.0;
    std::size_t used = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw UsageError("invalid p '" + s + "' (a number in (0,1) or p1, p2, p3)");
    if (!(v > 0.0 && v < 1.0)) throw UsageError("p must lie in the open interval (0,1), got " + s);
    return v;
}

std::vector<double> parse_grid(const std::string& g) {
    std::vector<std::string> parts;
    std::stringstream ss(g);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 3) throw UsageError("grid must be lo:hi:step, got '" + g + "'");
    const double lo = parse_p(parts[0]);
    const double hi = parse_p(parts[1]);
    double step = 0.0;
    try {
        step = std::stod(parts[2]);
    } catch (const std::exception&) {
        throw UsageError("invalid grid step '" + parts[2] + "'");
    }
    if (!(step > 0.0) || hi < lo) throw UsageError("grid needs lo <= hi and step > 0, got '" + g + "'");
    const auto count = static_cast<std::int64_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    if (count > 1'000'000) throw UsageError("grid has more than 10^6 points");
    std::vector<double> out;
    for (std::int64_t i = 0; i < count; ++i) out.push_back(lo + static_cast<double>(i) * step);
    return out;
}

std::vector<double> p_values(const std::vector<std::string>& ps, const std::string& grid) {
    std::vector<double> out;
    for (const auto& s : ps) out.push_back(parse_p(s));
    if (!grid.empty())
        for (double p : parse_grid(grid)) out.push_back(p);
    return out;
}

Model parse_model(const std::string& m) {
    if (m == "two-channel") return Model::TwoChannel;
    if (m == "erw") return Model::Erw;
    if (m == "urn") return Model::Urn;
    throw UsageError("unknown model '" + m + "' (expected two-channel, erw or urn)");
}

// Config file: a JSON object whose keys mirror the long flags (dashes become
// underscores). A run manifest is accepted too; its "parameters" object is
// used. Flags given on the command line win.
class ConfigMerge {
public:
    explicit ConfigMerge(json cfg) : cfg_(std::move(cfg)) {}

    template <class T>
    void operator()(const CLI::Option* opt, const std::string& key, T& var) const {
        if (opt->count() > 0 || !cfg_.contains(key)) return;
        try {
            assign(cfg_.at(key), var);
        } catch (const json::exception& e) {
            throw UsageError("config key '" + key + "': " + e.what());
        }
    }

    const json& raw() const { return cfg_; }

private:
    static void assign(const json& j, std::string& v) {
        v = j.is_number() ? format_double(j.get<double>()) : j.get<std::string>();
    }
    static void assign(const json& j, std::vector<std::string>& v) {
        v.clear();
        if (!j.is_array()) {
            v.emplace_back();
            assign(j, v.back());
            return;
        }
        for (const auto& e : j) {
            v.emplace_back();
            assign(e, v.back());
        }
    }
    template <class T>
    static void assign(const json& j, T& v) {
        v = j.get<T>();
    }

    json cfg_;
};

json load_config(const std::string& path, const std::string& subcommand, std::ostream& err) {
    if (path.empty()) return json::object();
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read config file " + path);
    json j;
    try {
        j = json::parse(f);
    } catch (const json::exception& e) {
        throw UsageError("config file " + path + " is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw UsageError("config file " + path + " must hold a JSON object");
    if (j.contains("parameters") && j["parameters"].is_object()) {
        if (j.contains("subcommand") && j["subcommand"] != subcommand)
            err << "note: manifest was written by '" << j["subcommand"].get<std::string>() << "', running '"
                << subcommand << "'\n";
        return j["parameters"];
    }
    return j;
}

std::string fmt(double x) { return format_double(x); }

template <class F>
std::string defined_or_empty(F&& f) {
    try {
        return fmt(f());
    } catch (const RegimeError&) {
        return "";
    }
}

std::string point_str(Vec2 v) {
    std::ostringstream os;
    os << std::setprecision(10) << "(" << v.x1 << ", " << v.x2 << ")";
    return os.str();
}

// Subcommands -------------------------------------------------------------------------

struct Context {
    fs::path out_dir;
    unsigned threads = 0;
    std::ostream& out;
    std::ostream& err;
};

int cmd_theory(const Context& ctx, const std::vector<double>& ps, const json& params) {
    if (ps.empty()) throw UsageError("theory needs --p or --grid");
    Table summary{{"p", "regime", "speed_c", "sigma1", "sigma2", "y_p", "variance_exponent", "zeros", "stable_zeros"},
                  {}};
    Table zeros{{"p", "kind", "x1", "x2", "lambda1", "lambda2", "nu1_x1", "nu1_x2", "nu2_x1", "nu2_x2", "stability",
                 "out_of_scope"},
                {}};
    const bool verbose = ps.size() <= 20;

    for (double p : ps) {
        const MemoryParam mp(p);
        const RegimeLabel label = regime_classify(mp).label;
        const auto fps = fixed_points(mp);
        int stable = 0;
        for (const auto& f : fps) {
            if (f.stability == Stability::LinearlyStable) ++stable;
            zeros.add({fmt(p), std::string(to_string(f.kind)), fmt(f.location.x1()), fmt(f.location.x2()),
                       fmt(f.lambda1), fmt(f.lambda2), fmt(f.nu1.x1), fmt(f.nu1.x2), fmt(f.nu2.x1), fmt(f.nu2.x2),
                       std::string(to_string(f.stability)), f.out_of_scope ? "true" : "false"});
        }
        const std::string speed = defined_or_empty([&] { return speed_c(mp); });
        const std::string s1 = defined_or_empty([&] { return sigma1(mp); });
        const std::string s2 = defined_or_empty([&] { return sigma2(mp); });
        const std::string y = defined_or_empty([&] { return exponent_y(mp); });
        const std::string ve = defined_or_empty([&] { return conjectured_variance_exponent(mp); });
        summary.add({fmt(p), std::string(to_string(label)), speed, s1, s2, y, ve, std::to_string(fps.size()),
                     std::to_string(stable)});

        if (!verbose) continue;
        auto& o = ctx.out;
        o << "p = " << fmt(p) << "\n  regime             " << to_string(label) << "\n";
        if (label == RegimeLabel::OpenBoundary)
            o << "  open case: the behaviour at p = 7/8 is not settled; no limit law is claimed\n";
        auto line = [&](const char* name, const std::string& v) {
            if (!v.empty()) o << "  " << std::left << std::setw(19) << name << v << "\n";
        };
        line("speed c_p", speed);
        line("Sigma1", s1);
        line("Sigma2", s2);
        line("y_p", y);
        line("Var(S_n) exponent", ve);
        for (const auto& f : fps)
            o << "  zero " << std::left << std::setw(10) << to_string(f.kind) << point_str(f.location.vec())
              << "  lambda = " << std::setprecision(10) << f.lambda1 << ", " << f.lambda2 << "  "
              << to_string(f.stability) << (f.out_of_scope ? " (no theorem)" : "") << "\n";
    }
    if (!verbose) ctx.out << "theory: " << ps.size() << " values of p\n";

    RunRecorder rec(ctx.out_dir, "theory", params);
    rec.write("theory.csv", summary.to_csv());
    rec.write("fixed_points.csv", zeros.to_csv());
    rec.finish();
    return kExitOk;
}

struct SimulateArgs {
    std::string p = "0.5";
    std::int64_t n = 10'000;
    std::int64_t replicas = 100;
    std::uint64_t seed = 1;
    std::string model = "two-channel";
    std::vector<std::int64_t> checkpoints;
    double erw_q = 0.5;
};

int cmd_simulate(const Context& ctx, const SimulateArgs& a) {
    const double p = parse_p(a.p);
    const Model model = parse_model(a.model);
    if (a.replicas < 1) throw UsageError("--replicas must be >= 1");
    EnsembleSpec spec;
    spec.p = p;
    spec.n_max = a.n;
    spec.checkpoints = a.checkpoints.empty() ? default_checkpoints(a.n) : a.checkpoints;
    spec.replicas = a.replicas;
    spec.seed = SeedSpec{a.seed};
    spec.threads = ctx.threads;
    spec.options.model = model;
    spec.options.erw_q = a.erw_q;
    const EnsembleResult e = ensemble_run(spec);

    Table ens{{"n", "count", "mean_S", "var_S", "mean_ratio", "var_ratio", "kurtosis"}, {}};
    for (const auto& c : e.summary)
        ens.add({std::to_string(c.n), std::to_string(c.count), fmt(c.mean_S), fmt(c.var_S), fmt(c.mean_ratio),
                 fmt(c.var_ratio), fmt(c.kurtosis)});

    Table traj;
    if (model == Model::Urn) {
        traj.header = {"n", "R", "B", "G"};
        for (const auto& r : e.paths.front().records)
            traj.add({std::to_string(r.n), std::to_string(r.n_plus), std::to_string(r.n_minus),
                      std::to_string(r.n - r.n_plus - r.n_minus)});
    } else {
        traj.header = {"n", "S", "n_plus", "n_minus"};
        for (const auto& r : e.paths.front().records)
            traj.add({std::to_string(r.n), std::to_string(r.position), std::to_string(r.n_plus),
                      std::to_string(r.n_minus)});
    }

    json params{{"p", p},       {"n", a.n},       {"checkpoints", spec.checkpoints}, {"replicas", a.replicas},
                {"seed", a.seed}, {"model", a.model}};
    if (model == Model::Erw) params["erw_q"] = a.erw_q;
    RunRecorder rec(ctx.out_dir, "simulate", params);
    rec.write("ensemble.csv", ens.to_csv());
    rec.write("trajectory.csv", traj.to_csv());
    const fs::path manifest = rec.finish();

    const auto& last = e.summary.back();
    ctx.out << "simulate: model=" << a.model << " p=" << fmt(p) << " replicas=" << a.replicas << " n=" << last.n
            << "\n  mean S_n/n = " << last.mean_ratio << ", Var(S_n) = " << last.var_S << "\n  wrote "
            << (ctx.out_dir / "ensemble.csv").string() << ", " << (ctx.out_dir / "trajectory.csv").string() << ", "
            << manifest.string() << "\n";
    return kExitOk;
}

struct VerifyArgs {
    std::string suite;
    std::string preset = "desk";
    std::uint64_t seed = 20240611;
    std::map<std::string, double> set;
};

int cmd_verify(const Context& ctx, const VerifyArgs& a) {
    const auto& names = suite_names();
    if (std::find(names.begin(), names.end(), a.suite) == names.end())
        throw UsageError("unknown suite '" + a.suite + "'");
    SuiteConfig cfg = preset_config(a.preset);
    cfg.seed = a.seed;
    for (const auto& [key, value] : a.set)
        if (!set_suite_field(cfg, key, value)) throw UsageError("unknown suite field '" + key + "'");
    cfg.threads = ctx.threads;

    Table table{{"name", "theory", "estimate", "uncertainty", "tolerance", "verdict", "check", "seed", "replicas",
                 "n", "p"},
                {}};
    bool ok = true;
    run_suite(a.suite, cfg, [&](const Check& c) {
        ok = ok && c.passed();
        ctx.out << (c.passed() ? "[PASS] " : "[FAIL] ") << c.title << "\n";
        for (const auto& r : c.rows) {
            ctx.out << "    " << std::left << std::setw(52) << r.name << " " << std::setw(10) << to_string(r.verdict)
                    << " estimate " << std::setprecision(6) << r.estimate << "  theory " << r.theory_value;
            if (r.verdict != Verdict::Diagnostic) ctx.out << "  tol " << r.tolerance;
            ctx.out << "\n";
            table.add({r.name, fmt(r.theory_value), fmt(r.estimate), fmt(r.uncertainty), fmt(r.tolerance),
                       std::string(to_string(r.verdict)), c.title, std::to_string(r.provenance.seed),
                       std::to_string(r.provenance.replicas), std::to_string(r.provenance.n),
                       fmt(r.provenance.p)});
        }
        ctx.out.flush();
    });

    json params{{"suite", a.suite}, {"preset", a.preset}, {"seed", a.seed}};
    if (!a.set.empty()) params["set"] = a.set;
    RunRecorder rec(ctx.out_dir, "verify", params);
    rec.write("verification.csv", table.to_csv());
    rec.finish();
    ctx.out << (ok ? "all checks passed\n" : "some checks FAILED\n");
    return ok ? kExitOk : kExitVerificationFailed;
}

struct ScanArgs {
    std::vector<std::string> p;
    std::string grid;
    std::int64_t n = 1 << 16;
    std::int64_t replicas = 1'000;
    std::uint64_t seed = 1;
};

int cmd_scan(const Context& ctx, const ScanArgs& a) {
    const auto ps = p_values(a.p, a.grid);
    if (ps.empty()) throw UsageError("scan needs --p or --grid");
    if (a.n < 1024) throw UsageError("scan needs --n >= 1024 so the fit window holds four checkpoints");
    if (a.replicas < 2) throw UsageError("--replicas must be >= 2");

    Table table{{"p", "fitted_exponent", "stderr", "r2", "n_lo", "n_hi", "theory_exponent"}, {}};
    std::ostringstream dat;
    dat << "# p fitted_exponent theory_exponent\n";
    std::vector<double> used;
    for (double p : ps) {
        if (thresholds::is_p1(p) || thresholds::is_p2(p) || thresholds::is_p3(p)) {
            ctx.err << "scan: skipping threshold p = " << fmt(p) << "\n";
            continue;
        }
        EnsembleSpec spec;
        spec.p = p;
        spec.n_max = a.n;
        spec.checkpoints = default_checkpoints(a.n);
        spec.replicas = a.replicas;
        spec.seed = SeedSpec{mix64(a.seed) + std::bit_cast<std::uint64_t>(p)};
        spec.threads = ctx.threads;
        const ExponentFit fit = variance_exponent(ensemble_run(spec));
        const double theory = conjectured_variance_exponent(MemoryParam(p));
        table.add({fmt(p), fmt(fit.slope), fmt(fit.stderr_slope), fmt(fit.r2), std::to_string(fit.n_lo),
                   std::to_string(fit.n_hi), fmt(theory)});
        char line[96];
        std::snprintf(line, sizeof line, "%10.6f %12.6f %12.6f\n", p, fit.slope, theory);
        dat << line;
        ctx.out << line;
        used.push_back(p);
    }

    RunRecorder rec(ctx.out_dir, "scan",
                    {{"p", used}, {"n", a.n}, {"replicas", a.replicas}, {"seed", a.seed}});
    rec.write("scan.csv", table.to_csv());
    rec.write("scan.dat", dat.str());
    rec.finish();
    return kExitOk;
}

struct OdeArgs {
    std::string p = "0.6";
    std::vector<double> x0;
    int basin_grid = 0;
    double T = 200.0;
    double dt = 0.01;
    int sample_every = 10;
};

int cmd_ode(const Context& ctx, const OdeArgs& a) {
    const MemoryParam mp(parse_p(a.p));
    if (a.x0.empty() && a.basin_grid == 0) throw UsageError("ode needs --x0 x1,x2 or --basin-grid K");
    if (!(a.dt > 0.0) || !(a.T >= 0.0)) throw UsageError("ode needs --dt > 0 and --T >= 0");
    json params{{"p", mp.value()}, {"T", a.T}, {"dt", a.dt}};
    if (!a.x0.empty()) {
        params["x0"] = a.x0;
        params["sample_every"] = a.sample_every;
    }
    if (a.basin_grid > 0) params["basin_grid"] = a.basin_grid;
    RunRecorder rec(ctx.out_dir, "ode", params);

    if (!a.x0.empty()) {
        if (a.x0.size() != 2) throw UsageError("--x0 takes two comma-separated numbers");
        if (!SimplexPoint::contains({a.x0[0], a.x0[1]}, 0.0)) throw UsageError("--x0 must lie in the simplex");
        const auto t = ode_integrate(mp, SimplexPoint(a.x0[0], a.x0[1]), a.T, a.dt, a.sample_every);
        Table table{{"t", "x1", "x2"}, {}};
        for (const auto& s : t.samples) table.add({fmt(s.t), fmt(s.x.x1), fmt(s.x.x2)});
        rec.write("ode.csv", table.to_csv());
        ctx.out << "ode: terminal " << point_str(t.terminal) << " nearest zero " << to_string(t.nearest_kind)
                << " at distance " << t.distance << "\n";
    }
    if (a.basin_grid > 0) {
        const auto scan = basin_scan(mp, basin_grid(a.basin_grid), a.T, a.dt);
        Table table{{"x1_start", "x2_start", "x1_end", "x2_end", "nearest_zero", "distance"}, {}};
        std::map<std::string, int> counts;
        for (const auto& b : scan) {
            const auto& t = b.trajectory;
            table.add({fmt(b.start.x1()), fmt(b.start.x2()), fmt(t.terminal.x1), fmt(t.terminal.x2),
                       std::string(to_string(t.nearest_kind)), fmt(t.distance)});
            ++counts[std::string(to_string(t.nearest_kind))];
        }
        rec.write("basins.csv", table.to_csv());
        ctx.out << "ode: " << scan.size() << " starts;";
        for (const auto& [k, v] : counts) ctx.out << " " << k << "=" << v;
        ctx.out << "\n";
    }
    rec.finish();
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-channel elephant random walk: exact theory, Monte Carlo and verification."};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    std::string config_path;
    std::string out_dir;
    unsigned threads = 0;
    app.add_option("--config", config_path, "JSON file whose keys mirror the flags (flags win)");
    auto* out_opt = app.add_option("--out", out_dir, "output directory (default: $MEMWALK_OUT or .)");
    auto* threads_opt = app.add_option("--threads", threads, "worker threads, 0 = all cores");

    // theory
    auto* theory = app.add_subcommand("theory", "closed-form constants, zeros and regimes");
    std::vector<std::string> theory_p;
    std::string theory_grid;
    auto* theory_p_opt = theory->add_option("--p", theory_p, "p values (numbers or p1, p2, p3)");
    auto* theory_grid_opt = theory->add_option("--grid", theory_grid, "p grid lo:hi:step");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "run an ensemble and write ensemble/trajectory CSV");
    SimulateArgs sim;
    auto* sim_p = simulate->add_option("--p", sim.p, "memory parameter (number or p1, p2, p3)");
    auto* sim_n = simulate->add_option("--n", sim.n, "final time (ball total for the urn)");
    auto* sim_r = simulate->add_option("--replicas", sim.replicas, "number of replicas");
    auto* sim_s = simulate->add_option("--seed", sim.seed, "master seed");
    auto* sim_m = simulate->add_option("--model", sim.model, "two-channel, erw or urn");
    auto* sim_c = simulate->add_option("--checkpoints", sim.checkpoints, "checkpoint times")->delimiter(',');
    auto* sim_q = simulate->add_option("--erw-q", sim.erw_q, "first-step up probability of the classical walk");

    // verify
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    VerifyArgs ver;
    auto* ver_suite = verify->add_option("suite", ver.suite, "exact, diffusive, critical, superdiffusive, "
                                                             "ballistic, urn, ode or all");
    auto* ver_preset = verify->add_option("--preset", ver.preset, "smoke, desk or deep");
    auto* ver_seed = verify->add_option("--seed", ver.seed, "master seed");
    std::vector<std::string> ver_set_raw;
    auto* ver_set = verify->add_option("--set", ver_set_raw, "override a suite size or tolerance, key=value");

    // scan
    auto* scan = app.add_subcommand("scan", "fitted Var(S_n) exponent against theory over a p grid");
    ScanArgs sc;
    auto* sc_p = scan->add_option("--p", sc.p, "p values");
    auto* sc_grid = scan->add_option("--grid", sc.grid, "p grid lo:hi:step");
    auto* sc_n = scan->add_option("--n", sc.n, "final time");
    auto* sc_r = scan->add_option("--replicas", sc.replicas, "replicas per p");
    auto* sc_s = scan->add_option("--seed", sc.seed, "master seed");

    // ode
    auto* ode = app.add_subcommand("ode", "integrate the mean-field ODE");
    OdeArgs od;
    auto* od_p = ode->add_option("--p", od.p, "memory parameter");
    auto* od_x0 = ode->add_option("--x0", od.x0, "start point x1,x2")->delimiter(',');
    auto* od_grid = ode->add_option("--basin-grid", od.basin_grid, "K: integrate from K*K interior starts");
    auto* od_T = ode->add_option("--T", od.T, "final time");
    auto* od_dt = ode->add_option("--dt", od.dt, "RK4 step");
    auto* od_every = ode->add_option("--sample-every", od.sample_every, "keep every k-th step");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        const std::string sub = app.get_subcommands().front()->get_name();
        const ConfigMerge merge(load_config(config_path, sub, err));
        merge(out_opt, "out", out_dir);
        merge(threads_opt, "threads", threads);
        if (out_dir.empty()) {
            const char* env = std::getenv("MEMWALK_OUT");
            out_dir = env && *env ? env : ".";
        }
        const Context ctx{out_dir, threads, out, err};

        if (sub == "theory") {
            merge(theory_p_opt, "p", theory_p);
            merge(theory_grid_opt, "grid", theory_grid);
            json params = json::object();
            if (!theory_p.empty()) params["p"] = theory_p;
            if (!theory_grid.empty()) params["grid"] = theory_grid;
            return cmd_theory(ctx, p_values(theory_p, theory_grid), params);
        }
        if (sub == "simulate") {
            merge(sim_p, "p", sim.p);
            merge(sim_n, "n", sim.n);
            merge(sim_r, "replicas", sim.replicas);
            merge(sim_s, "seed", sim.seed);
            merge(sim_m, "model", sim.model);
            merge(sim_c, "checkpoints", sim.checkpoints);
            merge(sim_q, "erw_q", sim.erw_q);
            return cmd_simulate(ctx, sim);
        }
        if (sub == "verify") {
            merge(ver_suite, "suite", ver.suite);
            merge(ver_preset, "preset", ver.preset);
            merge(ver_seed, "seed", ver.seed);
            if (ver_set->count() == 0 && merge.raw().contains("set")) {
                try {
                    ver.set = merge.raw()["set"].get<std::map<std::string, double>>();
                } catch (const json::exception& e) {
                    throw UsageError(std::string("config key 'set': ") + e.what());
                }
            }
            for (const auto& kv : ver_set_raw) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
                try {
                    ver.set[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
                } catch (const std::exception&) {
                    throw UsageError("--set value is not a number: '" + kv + "'");
                }
            }
            if (ver.suite.empty()) throw UsageError("verify needs a suite name");
            return cmd_verify(ctx, ver);
        }
        if (sub == "scan") {
            merge(sc_p, "p", sc.p);
            merge(sc_grid, "grid", sc.grid);
            merge(sc_n, "n", sc.n);
            merge(sc_r, "replicas", sc.replicas);
            merge(sc_s, "seed", sc.seed);
            return cmd_scan(ctx, sc);
        }
        merge(od_p, "p", od.p);
        merge(od_x0, "x0", od.x0);
        merge(od_grid, "basin_grid", od.basin_grid);
        merge(od_T, "T", od.T);
        merge(od_dt, "dt", od.dt);
        merge(od_every, "sample_every", od.sample_every);
        return cmd_ode(ctx, od);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const RegimeError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

}  // namespace memwalk
