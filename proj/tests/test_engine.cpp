#include <doctest.h>

#include <array>
#include <cmath>
#include <numeric>
#include <vector>

#include "memwalk/ensemble.hpp"
#include "memwalk/stats.hpp"

using namespace memwalk;

namespace {

// Independent enumeration of the next-step law: each channel retrieves a past
// value v with probability Gamma_v and multiplies it by Rad(p).
StepDistribution enumerate_law(double p, const WalkState& s) {
    const double n = static_cast<double>(s.n);
    const std::array<std::pair<int, double>, 3> value{
        {{1, s.n_plus / n}, {-1, s.n_minus / n}, {0, s.n_zero() / n}}};
    StepDistribution out;
    for (auto [v1, w1] : value)
        for (auto [v2, w2] : value)
            for (int e1 : {1, -1})
                for (int e2 : {1, -1}) {
                    const double w = w1 * w2 * (e1 == 1 ? p : 1 - p) * (e2 == 1 ? p : 1 - p);
                    const int t = std::clamp(e1 * v1 + e2 * v2, -1, 1);
                    (t == 1 ? out.q_plus : t == -1 ? out.q_minus : out.q_zero) += w;
                }
    return out;
}

std::vector<std::int64_t> every_step(std::int64_t from, std::int64_t to) {
    std::vector<std::int64_t> v(static_cast<std::size_t>(to - from + 1));
    std::iota(v.begin(), v.end(), from);
    return v;
}

}  // namespace

TEST_CASE("SplitMix64 reference output") {
    SplitMix64 sm(1234567);
    CHECK(sm.next() == 6457827717110365317ULL);
    CHECK(sm.next() == 3203168211198807973ULL);
}

TEST_CASE("streams are pure functions of seed and replica") {
    const SeedSpec a{42}, b{42}, c{43};
    auto r1 = a.stream(7), r2 = b.stream(7), r3 = c.stream(7), r4 = a.stream(8);
    const auto x = r1();
    CHECK(x == r2());
    CHECK(x != r3());
    CHECK(x != r4());
}

TEST_CASE("uniform and bounded draws stay in range") {
    Rng rng(1);
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
        REQUIRE(rng.below(7) < 7);
    }
    CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("step law: closed form, channel enumeration and independent oracle agree") {
    const std::vector<WalkState> states{{2, 1, 1}, {2, 2, 0}, {10, 3, 4}, {100, 90, 5}, {1000, 1, 2}, {57, 0, 0}};
    for (double p : {0.05, 0.5, 0.6875, 0.9, 0.99}) {
        const MemoryParam mp(p);
        for (const auto& s : states) {
            const auto a = step_distribution(mp, s);
            const auto b = channel_step_law(mp, s.gamma());
            const auto c = enumerate_law(p, s);
            CHECK(a.q_plus + a.q_minus + a.q_zero == doctest::Approx(1.0).epsilon(1e-15));
            CHECK(std::abs(a.q_plus - c.q_plus) < 1e-15);
            CHECK(std::abs(a.q_minus - c.q_minus) < 1e-15);
            CHECK(std::abs(b.q_plus - c.q_plus) < 1e-15);
            CHECK(std::abs(b.q_minus - c.q_minus) < 1e-15);
            // Martingale identity: E[e_{n+1}] - Gamma_n = h_p(Gamma_n).
            const Vec2 h = drift(mp, s.gamma());
            CHECK(std::abs(a.q_plus - s.gamma().x1 - h.x1) < 1e-15);
            CHECK(std::abs(a.q_minus - s.gamma().x2 - h.x2) < 1e-15);
        }
    }
}

TEST_CASE("channel truncation") {
    CHECK(truncate_channel_sum(-2) == -1);
    CHECK(truncate_channel_sum(-1) == -1);
    CHECK(truncate_channel_sum(0) == 0);
    CHECK(truncate_channel_sum(1) == 1);
    CHECK(truncate_channel_sum(2) == 1);
}

TEST_CASE("initial walk state") {
    int balanced = 0;
    for (std::uint64_t i = 0; i < 4000; ++i) {
        Rng rng = SeedSpec{5}.stream(i);
        const auto s = init_walk(rng);
        REQUIRE(s.n == 2);
        REQUIRE(s.n_zero() == 0);
        balanced += s.n_plus == 1;
    }
    CHECK(balanced / 4000.0 == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("literal and fast steps preserve the count invariants") {
    const MemoryParam p(0.8);
    Rng rng(9);
    WalkState a{2, 1, 1}, b{2, 2, 0};
    for (int i = 0; i < 1000; ++i) {
        a = step_literal(p, a, rng);
        b = step_fast(p, b, rng);
    }
    CHECK(a.n == 1002);
    CHECK(b.n == 1002);
    CHECK(a.n_zero() >= 0);
    CHECK(b.n_zero() >= 0);
}

TEST_CASE("literal and fast samplers agree in distribution") {
    const auto r = sampler_equivalence(MemoryParam(0.7), WalkState{20, 8, 5}, 200000, SeedSpec{77});
    CHECK(r.dof == 2);
    CHECK(r.p_value > 1e-4);
}

TEST_CASE("zero steps are absorbing only when every past step is zero") {
    // With no past +1 or -1 step the walk can only add zeros.
    const auto law = step_distribution(MemoryParam(0.7), WalkState{5, 0, 0});
    CHECK(law.q_zero == 1.0);
}

TEST_CASE("classical elephant walk") {
    const MemoryParam p(0.75);
    const ErwState s{10, 7};
    CHECK(erw_up_probability(p, s) == doctest::Approx(0.25 + 0.5 * 0.7));
    // Literal and closed-form steps: compare empirical up frequencies.
    Rng r1(1), r2(2);
    int up1 = 0, up2 = 0;
    const int draws = 200000;
    for (int i = 0; i < draws; ++i) {
        up1 += erw_step(p, s, r1).n_plus - s.n_plus;
        up2 += erw_step_literal(p, s, r2).n_plus - s.n_plus;
    }
    const double q = erw_up_probability(p, s);
    const double se = std::sqrt(q * (1 - q) / draws);
    CHECK(std::abs(up1 / double(draws) - q) < 5 * se);
    CHECK(std::abs(up2 / double(draws) - q) < 5 * se);

    Rng r3(3);
    const auto first = erw_init(1.0, r3);
    CHECK(first == ErwState{1, 1});
}

TEST_CASE("urn replacement rows are distributions") {
    for (double p : {0.2, 0.5, 0.95}) {
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                const auto row = urn_replacement_row(MemoryParam(p), BallColor(a), BallColor(b));
                CHECK(row[0] + row[1] + row[2] == doctest::Approx(1.0).epsilon(1e-15));
                for (double w : row) CHECK(w >= 0.0);
            }
    }
    Rng rng(4);
    auto u = urn_init(rng);
    CHECK(u.total() == 2);
    CHECK(u.green == 0);
    for (int i = 0; i < 100; ++i) u = urn_step(MemoryParam(0.6), u, rng);
    CHECK(u.total() == 102);
}

TEST_CASE("simulate validates checkpoints") {
    Rng rng(1);
    const MemoryParam p(0.5);
    const std::vector<std::int64_t> unsorted{10, 5}, early{1}, late{200};
    CHECK_THROWS_AS(simulate(p, 100, unsorted, rng), std::invalid_argument);
    CHECK_THROWS_AS(simulate(p, 100, early, rng), std::invalid_argument);
    CHECK_THROWS_AS(simulate(p, 100, late, rng), std::invalid_argument);
    CHECK(first_time(Model::Erw) == 1);
    CHECK(first_time(Model::TwoChannel) == 2);
    CHECK(first_time(Model::Urn) == 2);
}

TEST_CASE("checkpoint records are consistent and returns match a brute-force count") {
    for (Model model : {Model::TwoChannel, Model::Erw, Model::Urn}) {
        for (double p : {0.3, 0.8, 0.95}) {
            const std::int64_t n = 3000;
            const auto cps = every_step(first_time(model), n);
            Rng rng = SeedSpec{11}.stream(static_cast<std::uint64_t>(p * 100));
            SimulateOptions opts;
            opts.model = model;
            const auto t = simulate(MemoryParam(p), n, cps, rng, opts);
            REQUIRE(t.records.size() == cps.size());
            std::int64_t zeros = 0;
            for (const auto& r : t.records) {
                CHECK(r.position == r.n_plus - r.n_minus);
                CHECK(r.n_zero() >= 0);
                zeros += r.position == 0;
                REQUIRE(r.returns == zeros);
            }
            CHECK(returns_count(t) == zeros);
        }
    }
}

TEST_CASE("checkpoint subsets do not change the path") {
    const auto dense = every_step(2, 5000);
    const std::vector<std::int64_t> sparse{100, 1000, 5000};
    Rng r1 = SeedSpec{3}.stream(0), r2 = SeedSpec{3}.stream(0);
    const auto a = simulate(MemoryParam(0.8), 5000, dense, r1);
    const auto b = simulate(MemoryParam(0.8), 5000, sparse, r2);
    for (std::size_t i = 0; i < sparse.size(); ++i)
        CHECK(a.records[static_cast<std::size_t>(sparse[i] - 2)] == b.records[i]);
}

TEST_CASE("online quadratic strong law sums match a brute-force evaluation") {
    const std::int64_t n = 20000;
    const auto cps = every_step(2, n);
    for (Scaling scaling : {Scaling::Standard, Scaling::Critical}) {
        for (double center : {0.0, 0.3}) {
            SimulateOptions opts;
            opts.online = {true, true, scaling, center};
            Rng rng = SeedSpec{21}.stream(1);
            const auto t = simulate(MemoryParam(0.6), n, cps, rng, opts);
            double sum = 0.0, lil = 0.0;
            for (const auto& r : t.records) {
                const double k = static_cast<double>(r.n);
                const double d = static_cast<double>(r.position) / k - center;
                if (scaling == Scaling::Standard) {
                    sum += d * d;
                    if (r.n >= 16) lil = std::max(lil, std::sqrt(k / (2 * std::log(std::log(k)))) * std::abs(d));
                } else {
                    const double lk = std::log(k);
                    sum += d * d / (lk * lk);
                    if (r.n >= 16)
                        lil = std::max(lil, std::sqrt(k / (2 * lk * std::log(std::log(std::log(k))))) * std::abs(d));
                }
            }
            const double nd = static_cast<double>(n);
            const double expected = scaling == Scaling::Standard ? sum / std::log(nd) : sum / std::log(std::log(nd));
            CHECK(t.online.qsl == doctest::Approx(expected).epsilon(1e-10));
            CHECK(t.online.lil_max == doctest::Approx(lil).epsilon(1e-10));
        }
    }
}

TEST_CASE("ensembles are bit-identical across thread counts") {
    EnsembleSpec spec;
    spec.p = 0.8;
    spec.n_max = 4096;
    spec.checkpoints = geometric_checkpoints(7, 12);
    spec.replicas = 97;
    spec.seed = {123};
    spec.options.online.qsl = true;
    spec.threads = 1;
    const auto a = ensemble_run(spec);
    spec.threads = 4;
    const auto b = ensemble_run(spec);
    REQUIRE(a.paths.size() == b.paths.size());
    for (std::size_t i = 0; i < a.paths.size(); ++i) {
        CHECK(a.paths[i].records == b.paths[i].records);
        CHECK(a.paths[i].online.qsl == b.paths[i].online.qsl);
    }
    for (std::size_t c = 0; c < a.summary.size(); ++c) {
        CHECK(a.summary[c].mean_S == b.summary[c].mean_S);
        CHECK(a.summary[c].var_S == b.summary[c].var_S);
        CHECK(a.summary[c].kurtosis == b.summary[c].kurtosis);
    }
}

TEST_CASE("ensemble summary matches direct moments") {
    EnsembleSpec spec;
    spec.p = 0.5;
    spec.n_max = 1000;
    spec.checkpoints = {1000};
    spec.replicas = 500;
    spec.seed = {8};
    const auto e = ensemble_run(spec);
    const auto xs = e.positions(0);
    const auto m = moments(xs);
    CHECK(e.summary[0].mean_S == doctest::Approx(m.mean).epsilon(1e-12));
    CHECK(e.summary[0].var_S == doctest::Approx(m.variance).epsilon(1e-12));
    CHECK(e.summary[0].var_ratio == doctest::Approx(m.variance / 1e6).epsilon(1e-12));
    CHECK(e.checkpoint_index(1000) == 0);
    CHECK_THROWS_AS(e.checkpoint_index(999), std::out_of_range);
}

TEST_CASE("ensemble argument errors") {
    EnsembleSpec spec;
    spec.n_max = 100;
    spec.checkpoints = {100};
    spec.replicas = 0;
    CHECK_THROWS_AS(ensemble_run(spec), std::invalid_argument);
    spec.replicas = 3;
    spec.centers = {0.0};
    CHECK_THROWS_AS(ensemble_run(spec), std::invalid_argument);
    spec.centers.clear();
    spec.checkpoints = {1000};
    CHECK_THROWS_AS(ensemble_run(spec), std::invalid_argument);
}

TEST_CASE("checkpoint helpers") {
    CHECK(geometric_checkpoints(3, 5) == std::vector<std::int64_t>{8, 16, 32});
    CHECK_THROWS(geometric_checkpoints(5, 3));
    CHECK(default_checkpoints(100) == std::vector<std::int64_t>{100});
    const auto d = default_checkpoints(1000);
    CHECK(d.front() == 128);
    CHECK(d.back() == 512);
}
