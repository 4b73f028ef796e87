#pragma once

// Replica ensembles. Each replica draws from its own stream of the SeedSpec
// and writes into its own slot; summaries are reduced in replica order, so
// the output is bit-identical for any thread count.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "memwalk/engine.hpp"

namespace memwalk {

/// Cross-replica statistics at one checkpoint. Variances are unbiased
/// (divisor count - 1); kurtosis is the excess kurtosis of S_n from
/// population moments.
struct EnsembleCheckpoint {
    std::int64_t n = 0;
    std::int64_t count = 0;
    double mean_S = 0.0;
    double var_S = 0.0;
    double mean_ratio = 0.0;  ///< mean of S_n / n
    double var_ratio = 0.0;
    double kurtosis = 0.0;
};

struct EnsembleSpec {
    double p = 0.5;
    std::int64_t n_max = 0;
    std::vector<std::int64_t> checkpoints;
    std::int64_t replicas = 1;
    SeedSpec seed{};
    SimulateOptions options{};
    /// 0 selects std::thread::hardware_concurrency().
    unsigned threads = 0;
    /// Optional per-replica override of options.online.center.
    std::vector<double> centers;
};

struct EnsembleResult {
    EnsembleSpec spec;
    std::vector<Trajectory> paths;  ///< indexed by replica
    std::vector<EnsembleCheckpoint> summary;

    /// Values of `field` across replicas at checkpoint index `cp`.
    template <class F>
    std::vector<double> column(std::size_t cp, F&& field) const {
        std::vector<double> out;
        out.reserve(paths.size());
        for (const auto& t : paths) out.push_back(field(t.records[cp]));
        return out;
    }
    std::vector<double> positions(std::size_t cp) const {
        return column(cp, [](const CheckpointRecord& r) { return static_cast<double>(r.position); });
    }
    std::size_t checkpoint_index(std::int64_t n) const;
};

class EnsembleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Runs every replica to spec.n_max. Any failure in a worker (including
/// allocation failure) is rethrown as EnsembleError and no result is returned.
EnsembleResult ensemble_run(const EnsembleSpec& spec);

/// Two-pass moments of the per-replica records, reduced in replica order.
std::vector<EnsembleCheckpoint> summarize(const std::vector<Trajectory>& paths);

/// {2^lo, ..., 2^hi}.
std::vector<std::int64_t> geometric_checkpoints(int lo_exp, int hi_exp);

/// 2^7 .. 2^floor(log2 n_max); falls back to {n_max} when n_max < 128.
std::vector<std::int64_t> default_checkpoints(std::int64_t n_max);

}  // namespace memwalk
