#include "memwalk/engine.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace memwalk {

WalkState init_walk(Rng& rng) {
    WalkState s{2, 0, 0};
    for (int i = 0; i < 2; ++i) {
        if (rng.fair_bit()) ++s.n_plus;
        else ++s.n_minus;
    }
    return s;
}

StepDistribution step_distribution(MemoryParam mp, const WalkState& s) {
    const double p = mp.value();
    const Vec2 g = s.gamma();
    const double z = static_cast<double>(s.n_zero()) / static_cast<double>(s.n);
    const double up = p * g.x1 + (1.0 - p) * g.x2;
    const double down = (1.0 - p) * g.x1 + p * g.x2;
    // (up + down + z)^2 = 1 split by outcome.
    return {up * (up + 2.0 * z), down * (down + 2.0 * z), 2.0 * up * down + z * z};
}

StepDistribution channel_step_law(MemoryParam mp, Vec2 gamma) {
    const double p = mp.value();
    const std::array<std::pair<int, double>, 3> past{{{1, gamma.x1}, {-1, gamma.x2}, {0, 1.0 - gamma.x1 - gamma.x2}}};
    const std::array<std::pair<int, double>, 2> sign{{{1, p}, {-1, 1.0 - p}}};

    std::array<double, 3> law{};  // +1, -1, 0
    for (const auto& [v1, pv1] : past)
        for (const auto& [a1, pa1] : sign)
            for (const auto& [v2, pv2] : past)
                for (const auto& [a2, pa2] : sign) {
                    const int step = truncate_channel_sum(a1 * v1 + a2 * v2);
                    const double w = pv1 * pa1 * pv2 * pa2;
                    law[step == 1 ? 0 : (step == -1 ? 1 : 2)] += w;
                }
    return {law[0], law[1], law[2]};
}

WalkState step_literal(MemoryParam mp, WalkState s, Rng& rng) {
    const double p = mp.value();
    auto retrieve = [&]() {
        const auto idx = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(s.n)));
        const int value = idx < s.n_plus ? 1 : (idx < s.n_plus + s.n_minus ? -1 : 0);
        return rng.rademacher(p) * value;
    };
    const int x1 = retrieve();
    const int x2 = retrieve();
    const int step = truncate_channel_sum(x1 + x2);
    ++s.n;
    if (step == 1) ++s.n_plus;
    else if (step == -1) ++s.n_minus;
    return s;
}

// ---------------------------------------------------------------------------

UrnState urn_init(Rng& rng) {
    UrnState u;
    for (int i = 0; i < 2; ++i) {
        if (rng.fair_bit()) ++u.red;
        else ++u.black;
    }
    return u;
}

std::array<double, 3> urn_replacement_row(MemoryParam mp, BallColor first, BallColor second) {
    const double p = mp.value();
    const double q = 1.0 - p;
    auto lo = std::min(first, second);
    auto hi = std::max(first, second);
    using C = BallColor;
    if (lo == C::Red && hi == C::Red) return {p * p, q * q, 2.0 * p * q};
    if (lo == C::Red && hi == C::Black) return {p * q, p * q, p * p + q * q};
    if (lo == C::Red && hi == C::Green) return {p, q, 0.0};
    if (lo == C::Black && hi == C::Black) return {q * q, p * p, 2.0 * p * q};
    if (lo == C::Black && hi == C::Green) return {q, p, 0.0};
    return {0.0, 0.0, 1.0};
}

UrnState urn_step(MemoryParam mp, UrnState u, Rng& rng) {
    const auto total = static_cast<std::uint64_t>(u.total());
    auto draw = [&]() {
        const auto idx = static_cast<std::int64_t>(rng.below(total));
        if (idx < u.red) return BallColor::Red;
        if (idx < u.red + u.black) return BallColor::Black;
        return BallColor::Green;
    };
    const BallColor a = draw();
    const BallColor b = draw();
    const auto row = urn_replacement_row(mp, a, b);
    const double x = rng.uniform();
    if (x < row[0]) ++u.red;
    else if (x < row[0] + row[1]) ++u.black;
    else ++u.green;
    return u;
}

// ---------------------------------------------------------------------------

ErwState erw_init(double q, Rng& rng) {
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("erw_init: q must lie in [0,1]");
    return ErwState{1, rng.uniform() < q ? 1 : 0};
}

double erw_up_probability(MemoryParam mp, const ErwState& s) {
    const double p = mp.value();
    return (1.0 - p) + (2.0 * p - 1.0) * static_cast<double>(s.n_plus) / static_cast<double>(s.n);
}

ErwState erw_step(MemoryParam mp, ErwState s, Rng& rng) {
    const bool up = rng.uniform() < erw_up_probability(mp, s);
    ++s.n;
    if (up) ++s.n_plus;
    return s;
}

ErwState erw_step_literal(MemoryParam mp, ErwState s, Rng& rng) {
    const auto idx = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(s.n)));
    const int past = idx < s.n_plus ? 1 : -1;
    const int step = rng.rademacher(mp.value()) * past;
    ++s.n;
    if (step == 1) ++s.n_plus;
    return s;
}

// ---------------------------------------------------------------------------

namespace {

// Running sums for the quadratic strong law and the iterated-log maximum.
class OnlineAccumulator {
public:
    explicit OnlineAccumulator(const OnlineOptions& o) : opt_(o) {}

    void observe(std::int64_t k, std::int64_t position) {
        if (k < 2) return;
        const double kd = static_cast<double>(k);
        const double dev = static_cast<double>(position) / kd - opt_.center;
        const double sq = dev * dev;
        if (opt_.qsl) {
            if (opt_.scaling == Scaling::Standard) {
                qsl_sum_ += sq;
            } else {
                const double lk = std::log(kd);
                qsl_sum_ += sq / (lk * lk);
            }
        }
        if (opt_.lil && k >= 16) {
            const double lk = std::log(kd);
            const double scale = opt_.scaling == Scaling::Standard
                                     ? std::sqrt(kd / (2.0 * std::log(lk)))
                                     : std::sqrt(kd / (2.0 * lk * std::log(std::log(lk))));
            lil_max_ = std::max(lil_max_, scale * std::abs(dev));
        }
    }

    OnlineSummary finish(std::int64_t n) const {
        OnlineSummary out;
        const double ln = std::log(static_cast<double>(n));
        if (opt_.qsl) out.qsl = opt_.scaling == Scaling::Standard ? qsl_sum_ / ln : qsl_sum_ / std::log(ln);
        if (opt_.lil && n >= 16) out.lil_max = lil_max_;
        return out;
    }

private:
    OnlineOptions opt_;
    double qsl_sum_ = 0.0;
    double lil_max_ = 0.0;
};

template <bool kOnline, class State, class Advance, class Record>
Trajectory run_path(State state, std::int64_t n, std::int64_t n_max, std::span<const std::int64_t> checkpoints,
                    const OnlineOptions& online, Advance&& advance, Record&& record) {
    Trajectory out;
    out.records.reserve(checkpoints.size());
    OnlineAccumulator acc(online);
    std::size_t next = 0;
    std::int64_t returns = 0;

    auto visit = [&](std::int64_t k) {
        CheckpointRecord r = record(state, k);
        if (r.position == 0 && k >= 1) ++returns;
        if constexpr (kOnline) acc.observe(k, r.position);
        if (next < checkpoints.size() && checkpoints[next] == k) {
            r.returns = returns;
            out.records.push_back(r);
            ++next;
        }
    };

    visit(n);
    while (n < n_max) {
        advance(state);
        ++n;
        visit(n);
    }
    out.online = acc.finish(n_max);
    return out;
}

template <bool kOnline>
Trajectory simulate_model(MemoryParam p, std::int64_t n_max, std::span<const std::int64_t> checkpoints, Rng& rng,
                          const SimulateOptions& o) {
    switch (o.model) {
        case Model::TwoChannel: {
            const FastStepper stepper(p);
            return run_path<kOnline>(
                init_walk(rng), 2, n_max, checkpoints, o.online,
                [&](WalkState& s) { stepper.advance(s, rng); },
                [](const WalkState& s, std::int64_t k) {
                    return CheckpointRecord{k, s.position(), s.n_plus, s.n_minus, 0};
                });
        }
        case Model::Erw:
            return run_path<kOnline>(
                erw_init(o.erw_q, rng), 1, n_max, checkpoints, o.online,
                [&](ErwState& s) { s = erw_step(p, s, rng); },
                [](const ErwState& s, std::int64_t k) {
                    return CheckpointRecord{k, s.position(), s.n_plus, s.n_minus(), 0};
                });
        case Model::Urn:
            return run_path<kOnline>(
                urn_init(rng), 2, n_max, checkpoints, o.online,
                [&](UrnState& u) { u = urn_step(p, u, rng); },
                [](const UrnState& u, std::int64_t k) {
                    return CheckpointRecord{k, u.red - u.black, u.red, u.black, 0};
                });
    }
    throw std::logic_error("unknown model");
}

}  // namespace

std::int64_t first_time(Model model) { return model == Model::Erw ? 1 : 2; }

Trajectory simulate(MemoryParam p, std::int64_t n_max, std::span<const std::int64_t> checkpoints, Rng& rng,
                    const SimulateOptions& options) {
    const std::int64_t lo = first_time(options.model);
    if (n_max < lo) {
        std::ostringstream os;
        os << "simulate: n_max must be >= " << lo << ", got " << n_max;
        throw std::invalid_argument(os.str());
    }
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        const auto c = checkpoints[i];
        if (c < lo || c > n_max || (i > 0 && c <= checkpoints[i - 1])) {
            std::ostringstream os;
            os << "simulate: checkpoints must be strictly increasing within [" << lo << ", " << n_max
               << "], offending value " << c;
            throw std::invalid_argument(os.str());
        }
    }
    if (options.online.qsl || options.online.lil) return simulate_model<true>(p, n_max, checkpoints, rng, options);
    return simulate_model<false>(p, n_max, checkpoints, rng, options);
}

}  // namespace memwalk
