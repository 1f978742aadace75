#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "dlap/backend.hpp"
#include "dlap/kernels.hpp"

namespace dlap {

// {min, median, max, mean, std} of repeated timings, in seconds.  The unit
// flowing through all predictions.
struct SummaryStats {
    double min = 0, median = 0, max = 0, mean = 0, stddev = 0;

    SummaryStats& operator+=(const SummaryStats& o);
    static SummaryStats zero() { return {}; }
};

// Order statistics on the sorted sample; median of an even-length sample is
// the mean of the two central values; population standard deviation.
SummaryStats summarize(std::vector<double> timings);

enum class WarmPolicy { DoubleExecution, ExplicitWarm, Cold };
enum class TimerKind { Monotonic, CycleCounter };

struct MeasurementPlan {
    std::vector<Call> calls;
    int repetitions = 1;
    bool shuffle = false;
    WarmPolicy warm = WarmPolicy::DoubleExecution;
    TimerKind timer = TimerKind::Monotonic;
    std::uint64_t seed = 0;
};

// Ordered cache-priming accesses: named operand regions and remote flushes.
struct CachePrecondition {
    struct Access {
        bool remote = false;
        Operand operand;        // when !remote
        long long bytes = 0;    // region size
    };
    std::vector<Access> accesses;

    bool empty() const { return accesses.empty(); }
};

class Sampler {
  public:
    Sampler(Backend& backend, double base_frequency_hz = 0);

    // raw timings in seconds: one vector of `repetitions` entries per call
    std::vector<std::vector<double>> run_plan(const MeasurementPlan& plan, BufferStore& store);

    // like run_plan, but applies `pre` before every timed execution
    std::vector<double> run_with_precondition(const Call& call, const CachePrecondition& pre,
                                              int repetitions, BufferStore& store);

    void apply_precondition(const CachePrecondition& pre, BufferStore& store);

    void set_scratch_bytes(long long bytes) { scratch_bytes_ = bytes; }
    // test hook: observes every priming access as (label, bytes)
    void set_access_observer(std::function<void(const std::string&, long long)> f) {
        observer_ = std::move(f);
    }

    Backend& backend() { return backend_; }

  private:
    Clock& pick_clock(TimerKind kind);

    Backend& backend_;
    SteadyClock steady_;
    std::optional<CycleClock> cycle_;
    long long scratch_bytes_ = 64LL << 20;
    long long scratch_cursor_ = 0;
    std::function<void(const std::string&, long long)> observer_;
};

// Deterministic Fisher-Yates permutation of 0..n-1 under the given seed.
std::vector<size_t> shuffled_indices(size_t n, std::uint64_t seed);

}  // namespace dlap
