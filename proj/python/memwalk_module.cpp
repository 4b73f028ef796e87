// Python bindings for the theory, engine and ODE layers.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "memwalk/dynamics.hpp"
#include "memwalk/ensemble.hpp"
#include "memwalk/stats.hpp"
#include "memwalk/theory.hpp"

namespace py = pybind11;
using namespace memwalk;

namespace {

Branch to_branch(const std::string& b) {
    if (b == "plus") return Branch::Plus;
    if (b == "minus") return Branch::Minus;
    throw py::value_error("branch must be 'plus' or 'minus'");
}

Model to_model(const std::string& m) {
    if (m == "two-channel") return Model::TwoChannel;
    if (m == "erw") return Model::Erw;
    if (m == "urn") return Model::Urn;
    throw py::value_error("model must be 'two-channel', 'erw' or 'urn'");
}

py::tuple vec(Vec2 v) { return py::make_tuple(v.x1, v.x2); }

py::list fixed_points_py(double p) {
    py::list out;
    for (const auto& f : fixed_points(MemoryParam(p))) {
        py::dict d;
        d["kind"] = std::string(to_string(f.kind));
        d["location"] = vec(f.location.vec());
        d["eigenvalues"] = py::make_tuple(f.lambda1, f.lambda2);
        d["eigenvectors"] = py::make_tuple(vec(f.nu1), vec(f.nu2));
        d["stable"] = f.stability == Stability::LinearlyStable;
        out.append(d);
    }
    return out;
}

py::dict simulate_py(double p, std::int64_t n_max, std::vector<std::int64_t> checkpoints, std::int64_t replicas,
                     std::uint64_t seed, const std::string& model, unsigned threads) {
    EnsembleSpec s;
    s.p = p;
    s.n_max = n_max;
    s.checkpoints = checkpoints.empty() ? default_checkpoints(n_max) : std::move(checkpoints);
    s.replicas = replicas;
    s.seed = SeedSpec{seed};
    s.threads = threads;
    s.options.model = to_model(model);
    EnsembleResult e;
    {
        py::gil_scoped_release release;
        e = ensemble_run(s);
    }
    py::dict out;
    std::vector<std::int64_t> n;
    std::vector<double> mean, var;
    for (const auto& c : e.summary) {
        n.push_back(c.n);
        mean.push_back(c.mean_S);
        var.push_back(c.var_S);
    }
    out["n"] = n;
    out["mean_S"] = mean;
    out["var_S"] = var;
    out["final_positions"] = e.positions(e.spec.checkpoints.size() - 1);
    return out;
}

}  // namespace

PYBIND11_MODULE(_memwalk, m) {
    m.doc() = "Two-channel elephant random walk: closed forms, Monte Carlo and the mean-field ODE";

    py::register_exception<RegimeError>(m, "RegimeError", PyExc_ValueError);

    m.attr("P1") = thresholds::kP1;
    m.attr("P2") = thresholds::kP2;
    m.attr("P3") = thresholds::kP3;

    m.def("regime", [](double p) { return std::string(to_string(regime_classify(MemoryParam(p)).label)); }, py::arg("p"));
    m.def("drift", [](double p, double x1, double x2) { return vec(drift(MemoryParam(p), Vec2{x1, x2})); },
          py::arg("p"), py::arg("x1"), py::arg("x2"));
    m.def(
        "jacobian",
        [](double p, double x1, double x2) {
            const Mat2 j = jacobian(MemoryParam(p), Vec2{x1, x2});
            return py::make_tuple(py::make_tuple(j.a, j.b), py::make_tuple(j.c, j.d));
        },
        py::arg("p"), py::arg("x1"), py::arg("x2"));
    m.def("fixed_points", &fixed_points_py, py::arg("p"));
    m.def("speed_c", [](double p) { return speed_c(MemoryParam(p)); }, py::arg("p"));
    m.def("sigma1", [](double p, const std::string& b) { return sigma1(MemoryParam(p), to_branch(b)); }, py::arg("p"),
          py::arg("branch") = "plus");
    m.def("sigma2", [](double p, const std::string& b) { return sigma2(MemoryParam(p), to_branch(b)); }, py::arg("p"),
          py::arg("branch") = "plus");
    m.def("exponent_y", [](double p) { return exponent_y(MemoryParam(p)); }, py::arg("p"));
    m.def("variance_exponent", [](double p) { return conjectured_variance_exponent(MemoryParam(p)); }, py::arg("p"));
    m.def(
        "alpha_beta",
        [](double p, const std::string& b) {
            const AlphaBeta ab = alpha_beta(MemoryParam(p), to_branch(b));
            return py::make_tuple(ab.alpha, ab.beta);
        },
        py::arg("p"), py::arg("branch") = "plus");
    m.def(
        "step_distribution",
        [](double p, std::int64_t n, std::int64_t n_plus, std::int64_t n_minus) {
            if (n < 2 || n_plus < 0 || n_minus < 0 || n_plus + n_minus > n)
                throw py::value_error("need n >= 2 and 0 <= n_plus + n_minus <= n");
            const auto d = step_distribution(MemoryParam(p), WalkState{n, n_plus, n_minus});
            return py::make_tuple(d.q_plus, d.q_minus, d.q_zero);
        },
        py::arg("p"), py::arg("n"), py::arg("n_plus"), py::arg("n_minus"));
    m.def("simulate", &simulate_py, py::arg("p"), py::arg("n_max"), py::arg("checkpoints") = std::vector<std::int64_t>{},
          py::arg("replicas") = 100, py::arg("seed") = 1, py::arg("model") = "two-channel", py::arg("threads") = 0,
          "Runs an ensemble; returns per-checkpoint mean/variance of S_n and the final positions.");
    m.def(
        "ode_integrate",
        [](double p, double x1, double x2, double T, double dt) {
            const auto t = ode_integrate(MemoryParam(p), SimplexPoint(x1, x2), T, dt, 1);
            return py::make_tuple(vec(t.terminal), std::string(to_string(t.nearest_kind)), t.distance);
        },
        py::arg("p"), py::arg("x1"), py::arg("x2"), py::arg("T") = 200.0, py::arg("dt") = 0.01,
        "Returns (terminal point, nearest zero kind, distance to it).");
    m.def(
        "newton_fixed_points",
        [](double p) {
            py::list out;
            for (const auto& r : newton_fixed_points(MemoryParam(p))) out.append(vec(r.vec()));
            return out;
        },
        py::arg("p"));
}
