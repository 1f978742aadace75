#pragma once

#include <map>
#include <string>
#include <vector>

#include "dlap/kernels.hpp"

// Combines in-cache and out-of-cache kernel timings into per-call estimates
// for blocked algorithms: LRU access distances over the call sequence plus a
// smoothed cache-membership function.

namespace dlap {

struct AccessRecord {
    std::string id;       // operand identity (buffer/offset/extent)
    long long bytes = 0;
    DataDir dir = DataDir::In;
};

// one call contributes one batch, or two when its small output is split off
struct AccessBatch {
    std::vector<AccessRecord> records;
};

struct SmoothingParams {
    double alpha = 4.0;
    double beta = 2.0;
    // "significantly smaller" output rule: output <= threshold * inputs and
    // inputs exceed the cache
    double split_threshold = 0.25;
};

std::string region_id(const OperandRegion& r);

// f(r) = tanh(alpha r) for r >= 0, tanh(beta r) for r < 0
double smoothing_f(double r, const SmoothingParams& p);

std::vector<AccessBatch> split_records(const Call& call, long long cache_bytes,
                                       double threshold = 0.25);

// bytes of other data touched since the operand's last access; the history is
// bounded to `history_calls` preceding calls, and `fallback_bytes` is used
// when no previous access is found
long long access_distance(const std::vector<Call>& sequence, size_t index,
                          const OperandRegion& target, size_t history_calls,
                          long long fallback_bytes, long long cache_bytes,
                          double split_threshold = 0.25);

double initial_estimate(double s_ic, double s_oc, double t_ic, double t_oc);

struct WeightedOperand {
    double bytes = 0;
    double rel_distance = 0;  // (cache - distance) / cache
};

// in-/out-of-cache byte weights; s_ic + s_oc equals the total operand bytes
std::pair<double, double> smooth_weights(const std::vector<WeightedOperand>& ops,
                                         const SmoothingParams& p, bool smooth = true);

std::string call_identity(const Call& c);

struct CallEstimate {
    size_t index = 0;
    std::string kernel;
    std::string identity;
    double s_ic = 0, s_oc = 0;
    double t_est = 0;
};

struct CombinedEstimates {
    std::vector<CallEstimate> per_call;
    double total = 0;
};

// Pipeline over a blocked algorithm's call sequence: distances -> smoothed
// weights -> weighted combination of the in-/out-of-cache timings (indexed by
// call identity).
CombinedEstimates combined_estimates(const std::string& algorithm, long n, long b,
                                     const std::map<std::string, double>& t_ic,
                                     const std::map<std::string, double>& t_oc,
                                     long long cache_bytes, const SmoothingParams& params,
                                     bool smooth = true);

// per-call export rows: index, kernel, flags, sizes, s_ic, s_oc, t_est
std::string estimate_report(const CombinedEstimates& est);

// In-/out-of-cache timings for every distinct call of a blocked algorithm:
// in-cache runs load all input-only operands just before the invocation,
// out-of-cache runs touch a memory section larger than the cache.
std::pair<std::map<std::string, double>, std::map<std::string, double>> measure_cache_timings(
    class Sampler& sampler, const std::string& algorithm, long n, long b, long long cache_bytes,
    int repetitions = 10);

}  // namespace dlap
