// Acceptance run at the reference (desk) scale. Prints one verdict line per
// criterion followed by its supporting rows.
//
// Exit status is 0 when every failing row is a documented shortfall (listed
// below and explained in the README), 1 otherwise.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <string_view>
#include <vector>

#include "memwalk/suites.hpp"

using namespace memwalk;

namespace {

struct Criterion {
    std::string name;
    std::function<std::vector<Check>(const SuiteConfig&)> run;
};

// Rows that fail at the reference scale for reasons recorded in the README.
const std::vector<std::string_view> kDocumentedShortfalls{"ballistic.fraction_near_speed[p=0.95]"};

bool documented(const VerificationReport& r) {
    for (auto s : kDocumentedShortfalls)
        if (r.name == s) return true;
    return false;
}

std::vector<Criterion> criteria() {
    auto one = [](auto f) { return [f](const SuiteConfig& c) { return std::vector<Check>{f(c)}; }; };
    return {
        {"drift zeros and Newton oracle", one([](const SuiteConfig& c) { return check_drift_zeros(c); })},
        {"eigenstructure, threshold eigenvalues and decomposition of (1,-1)",
         one([](const SuiteConfig& c) { return check_eigenstructure(c); })},
        {"ballistic CLT variance: Lyapunov solution against quadrature",
         one([](const SuiteConfig& c) { return check_sigma1_quadrature(c); })},
        {"one-step increment mean and covariance against drift and noise",
         one([](const SuiteConfig& c) { return check_increment_moments(c); })},
        {"diffusive CLT at p=0.5 (variance 2/3, kurtosis)", one([](const SuiteConfig& c) { return check_clt(c, 0.5); })},
        {"diffusive CLT at p=0.6 (variance 10/7, kurtosis)", one([](const SuiteConfig& c) { return check_clt(c, 0.6); })},
        {"superdiffusive exponents at p=0.8", one([](const SuiteConfig& c) { return check_superdiffusive(c, 0.8); })},
        {"ballistic speed, sign symmetry and quadratic growth at p=0.95",
         one([](const SuiteConfig& c) { return check_ballistic(c, 0.95); })},
        {"critical variance Var(S_n)/(n ln n) at p=11/16",
         one([](const SuiteConfig& c) { return check_lower_critical(c); })},
        {"quadratic strong law at p=0.5", one([](const SuiteConfig& c) { return check_qsl(c, 0.5); })},
        {"literal and fast samplers agree at 20 (p, state) pairs",
         one([](const SuiteConfig& c) { return check_sampler_equivalence(c); })},
        {"urn R-B matches the walk at p in {0.5, 0.8, 0.95}",
         one([](const SuiteConfig& c) { return check_urn_embedding(c); })},
        {"ODE basins at p=0.6 and p=0.95",
         [](const SuiteConfig& c) { return std::vector<Check>{check_ode_basins(c, 0.6), check_ode_basins(c, 0.95)}; }},
        {"classical elephant walk variance exponent at p=0.6",
         one([](const SuiteConfig& c) { return check_erw_baseline(c, 0.6); })},
    };
}

}  // namespace

int main(int argc, char** argv) {
    const std::string preset = argc > 1 ? argv[1] : "desk";
    const SuiteConfig cfg = preset_config(preset);
    std::cout << "acceptance run, preset " << preset << ", seed " << cfg.seed << "\n";

    int failed = 0, undocumented = 0;
    for (const auto& crit : criteria()) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto checks = crit.run(cfg);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        bool pass = true, only_documented = true;
        for (const auto& c : checks)
            for (const auto& r : c.rows)
                if (!r.passed()) {
                    pass = false;
                    only_documented = only_documented && documented(r);
                }
        if (!pass) {
            ++failed;
            if (!only_documented) ++undocumented;
        }

        char timing[32];
        std::snprintf(timing, sizeof timing, "%.1f s", secs);
        std::cout << (pass ? "[PASS] " : "[FAIL] ") << crit.name << "  (" << timing << ")"
                  << (!pass && only_documented ? "  documented shortfall" : "") << "\n";
        for (const auto& c : checks)
            for (const auto& r : c.rows) {
                char line[256];
                std::snprintf(line, sizeof line, "    %-11s %-58s estimate %-13.6g theory %-13.6g tol %.3g\n",
                              std::string(to_string(r.verdict)).c_str(), r.name.c_str(), r.estimate, r.theory_value,
                              r.tolerance);
                std::cout << line;
            }
        std::cout.flush();
    }
    std::cout << failed << " criteria failed, " << undocumented << " without a documented cause\n";
    return undocumented == 0 ? 0 : 1;
}
