#pragma once

// Step-level dynamics of the two-channel walk, the classical elephant walk and
// the three-colour urn. States are constant-size sufficient statistics: the
// conditional law of the next step depends on the past only through the
// counts of +1, -1 and 0 steps.

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "memwalk/rng.hpp"
#include "memwalk/theory.hpp"

namespace memwalk {

struct WalkState {
    std::int64_t n = 0;
    std::int64_t n_plus = 0;
    std::int64_t n_minus = 0;

    constexpr std::int64_t position() const { return n_plus - n_minus; }
    constexpr std::int64_t n_zero() const { return n - n_plus - n_minus; }
    Vec2 gamma() const {
        const double inv = 1.0 / static_cast<double>(n);
        return {static_cast<double>(n_plus) * inv, static_cast<double>(n_minus) * inv};
    }
    friend constexpr bool operator==(const WalkState&, const WalkState&) = default;
};

/// Conditional law of the next step.
struct StepDistribution {
    double q_plus = 0.0;
    double q_minus = 0.0;
    double q_zero = 0.0;
};

// Two-channel walk -------------------------------------------------------------

/// First two steps are independent fair signs; returns the state at n = 2.
WalkState init_walk(Rng& rng);

/// Next-step law from the current counts. q_plus equals the first component of
/// h_p(Gamma_n) + Gamma_n.
StepDistribution step_distribution(MemoryParam p, const WalkState& s);

/// Same law obtained by enumerating both channels' retrieved value and sign
/// and truncating their sum; independent of the closed form above.
StepDistribution channel_step_law(MemoryParam p, Vec2 gamma);

/// Truncation of the channel sum T in {-2..2} to a step in {-1, 0, 1}.
constexpr int truncate_channel_sum(int t) { return t > 1 ? 1 : (t < -1 ? -1 : t); }

/// Two retrieved past steps, two Rad(p) signs, truncated sum.
WalkState step_literal(MemoryParam p, WalkState s, Rng& rng);

/// O(1) stepper drawing one uniform against the precomputed step law.
class FastStepper {
public:
    explicit FastStepper(MemoryParam p) : p_(p.value()), q_(1.0 - p.value()) {}

    /// Advances `s` by one step and returns the step value.
    int advance(WalkState& s, Rng& rng) const {
        const double inv = 1.0 / static_cast<double>(s.n);
        const double g1 = static_cast<double>(s.n_plus) * inv;
        const double g2 = static_cast<double>(s.n_minus) * inv;
        const double z = static_cast<double>(s.n_zero()) * inv;
        const double up = p_ * g1 + q_ * g2;    // a channel returns +1
        const double down = q_ * g1 + p_ * g2;  // a channel returns -1
        const double q_plus = up * (up + 2.0 * z);
        const double q_minus = down * (down + 2.0 * z);
        const double u = rng.uniform();
        ++s.n;
        if (u < q_plus) {
            ++s.n_plus;
            return 1;
        }
        if (u < q_plus + q_minus) {
            ++s.n_minus;
            return -1;
        }
        return 0;
    }

private:
    double p_;
    double q_;
};

inline WalkState step_fast(MemoryParam p, WalkState s, Rng& rng) {
    FastStepper(p).advance(s, rng);
    return s;
}

// Urn ------------------------------------------------------------------------

enum class BallColor : std::uint8_t { Red = 0, Black = 1, Green = 2 };

struct UrnState {
    std::int64_t red = 0;
    std::int64_t black = 0;
    std::int64_t green = 0;

    constexpr std::int64_t total() const { return red + black + green; }
    friend constexpr bool operator==(const UrnState&, const UrnState&) = default;
};

/// (2,0,0) w.p. 1/4, (0,2,0) w.p. 1/4, (1,1,0) w.p. 1/2.
UrnState urn_init(Rng& rng);

/// Colour law (R, B, G) of the added ball given the unordered drawn pair.
std::array<double, 3> urn_replacement_row(MemoryParam p, BallColor first, BallColor second);

/// Two draws with replacement, one ball added.
UrnState urn_step(MemoryParam p, UrnState u, Rng& rng);

// Classical elephant random walk ---------------------------------------------

struct ErwState {
    std::int64_t n = 0;
    std::int64_t n_plus = 0;

    constexpr std::int64_t n_minus() const { return n - n_plus; }
    constexpr std::int64_t position() const { return 2 * n_plus - n; }
    friend constexpr bool operator==(const ErwState&, const ErwState&) = default;
};

/// First step +1 with probability q.
ErwState erw_init(double q, Rng& rng);

/// P(next step = +1) = (1-p) + (2p-1) * n_plus / n.
double erw_up_probability(MemoryParam p, const ErwState& s);

ErwState erw_step(MemoryParam p, ErwState s, Rng& rng);

/// Uniform past index, Rad(p) sign.
ErwState erw_step_literal(MemoryParam p, ErwState s, Rng& rng);

// Trajectories -----------------------------------------------------------------

enum class Model { TwoChannel, Erw, Urn };

/// Record at one checkpoint. For the urn, n is the ball total (draws + 2),
/// n_plus/n_minus are the red/black counts and position is R - B, which puts
/// it on the same clock as the walk it embeds.
struct CheckpointRecord {
    std::int64_t n = 0;
    std::int64_t position = 0;
    std::int64_t n_plus = 0;
    std::int64_t n_minus = 0;
    /// Number of indices 1 <= k <= n with position 0.
    std::int64_t returns = 0;

    constexpr std::int64_t n_zero() const { return n - n_plus - n_minus; }
    friend constexpr bool operator==(const CheckpointRecord&, const CheckpointRecord&) = default;
};

/// Scalings for the running sums; Critical adds the logarithmic corrections
/// used at p = 11/16 and p = p3.
enum class Scaling { Standard, Critical };

/// Statistics accumulated over every step of a path, not only checkpoints.
struct OnlineOptions {
    bool qsl = false;
    bool lil = false;
    Scaling scaling = Scaling::Standard;
    /// Subtracted from S_k/k (the almost-sure limit attributed to the path).
    double center = 0.0;
};

struct OnlineSummary {
    /// (1/ln n) sum_{k=2}^n (S_k/k - c)^2, or the critical form
    /// (1/ln ln n) sum_{k=2}^n (S_k/k - c)^2 / ln(k)^2.
    double qsl = std::numeric_limits<double>::quiet_NaN();
    /// max over 16 <= k <= n of sqrt(k / (2 ln ln k)) |S_k/k - c|, or with
    /// sqrt(k / (2 ln k ln ln ln k)) in the critical form.
    double lil_max = std::numeric_limits<double>::quiet_NaN();
};

struct SimulateOptions {
    Model model = Model::TwoChannel;
    double erw_q = 0.5;
    OnlineOptions online{};
};

struct Trajectory {
    std::vector<CheckpointRecord> records;
    OnlineSummary online;

    const CheckpointRecord& final_record() const { return records.back(); }
};

/// Smallest valid time for a model: 1 for the classical walk, 2 otherwise.
std::int64_t first_time(Model model);

/// Runs one path to n_max. Checkpoints must be strictly increasing and lie in
/// [first_time(model), n_max]. Throws std::invalid_argument otherwise.
Trajectory simulate(MemoryParam p, std::int64_t n_max, std::span<const std::int64_t> checkpoints, Rng& rng,
                    const SimulateOptions& options = {});

}  // namespace memwalk
