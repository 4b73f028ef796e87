#include "memwalk/ensemble.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <new>
#include <thread>

namespace memwalk {

std::size_t EnsembleResult::checkpoint_index(std::int64_t n) const {
    for (std::size_t i = 0; i < spec.checkpoints.size(); ++i)
        if (spec.checkpoints[i] == n) return i;
    throw std::out_of_range("no checkpoint at n = " + std::to_string(n));
}

std::vector<EnsembleCheckpoint> summarize(const std::vector<Trajectory>& paths) {
    std::vector<EnsembleCheckpoint> out;
    if (paths.empty()) return out;
    const std::size_t k = paths.front().records.size();
    const auto count = static_cast<double>(paths.size());
    out.reserve(k);
    for (std::size_t c = 0; c < k; ++c) {
        EnsembleCheckpoint e;
        e.n = paths.front().records[c].n;
        e.count = static_cast<std::int64_t>(paths.size());
        double sum = 0.0;
        for (const auto& t : paths) sum += static_cast<double>(t.records[c].position);
        const double mean = sum / count;
        double m2 = 0.0, m4 = 0.0;
        for (const auto& t : paths) {
            const double d = static_cast<double>(t.records[c].position) - mean;
            const double d2 = d * d;
            m2 += d2;
            m4 += d2 * d2;
        }
        const double nd = static_cast<double>(e.n);
        e.mean_S = mean;
        e.var_S = paths.size() > 1 ? m2 / (count - 1.0) : 0.0;
        e.mean_ratio = mean / nd;
        e.var_ratio = e.var_S / (nd * nd);
        const double pm2 = m2 / count;
        e.kurtosis = pm2 > 0.0 ? (m4 / count) / (pm2 * pm2) - 3.0 : 0.0;
        out.push_back(e);
    }
    return out;
}

EnsembleResult ensemble_run(const EnsembleSpec& spec) {
    if (spec.replicas < 1) throw std::invalid_argument("ensemble_run: replicas must be >= 1");
    if (!spec.centers.empty() && static_cast<std::int64_t>(spec.centers.size()) != spec.replicas)
        throw std::invalid_argument("ensemble_run: centers must have one entry per replica");
    const MemoryParam p(spec.p);

    EnsembleResult result;
    result.spec = spec;
    try {
        result.paths.resize(static_cast<std::size_t>(spec.replicas));
    } catch (const std::bad_alloc&) {
        throw EnsembleError("ensemble_run: cannot allocate " + std::to_string(spec.replicas) + " replicas");
    }

    std::atomic<std::int64_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&]() {
        try {
            for (std::int64_t i = next++; i < spec.replicas && !failed; i = next++) {
                SimulateOptions opts = spec.options;
                if (!spec.centers.empty()) opts.online.center = spec.centers[static_cast<std::size_t>(i)];
                Rng rng = spec.seed.stream(static_cast<std::uint64_t>(i));
                result.paths[static_cast<std::size_t>(i)] = simulate(p, spec.n_max, spec.checkpoints, rng, opts);
            }
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            failed = true;
        }
    };

    unsigned threads = spec.threads != 0 ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::int64_t>(threads, spec.replicas));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    if (error) {
        try {
            std::rethrow_exception(error);
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception& e) {
            throw EnsembleError(std::string("ensemble_run: ") + e.what());
        }
    }
    result.summary = summarize(result.paths);
    return result;
}

std::vector<std::int64_t> geometric_checkpoints(int lo_exp, int hi_exp) {
    if (lo_exp < 0 || hi_exp > 62 || lo_exp > hi_exp)
        throw std::invalid_argument("geometric_checkpoints: need 0 <= lo <= hi <= 62");
    std::vector<std::int64_t> out;
    for (int e = lo_exp; e <= hi_exp; ++e) out.push_back(std::int64_t{1} << e);
    return out;
}

std::vector<std::int64_t> default_checkpoints(std::int64_t n_max) {
    if (n_max < 128) return {n_max};
    int hi = 0;
    while ((std::int64_t{1} << (hi + 1)) <= n_max) ++hi;
    return geometric_checkpoints(7, hi);
}

}  // namespace memwalk
