#pragma once

#include <string>
#include <vector>

#include "dlap/blocked.hpp"
#include "dlap/kernels.hpp"
#include "dlap/model.hpp"

// Runtime/performance/efficiency predictions for blocked algorithms from
// per-call model estimates, plus ranking, block-size optimization, and
// accuracy scoring.

namespace dlap {

struct Prediction {
    SummaryStats runtime;      // seconds
    SummaryStats performance;  // flops/s
    SummaryStats efficiency;   // fraction of peak
    long long cost = 0;        // minimal flop count of the operation
    long call_count = 0;       // kernel invocations (pseudo calls excluded)
    long unmodeled_pseudo = 0; // inline updates carried at estimate 0
};

// err = pred - meas, RE = err/meas, ARE = |RE|, per statistic
struct AccuracyReport {
    SummaryStats err, re, are;
};

SummaryStats predict_runtime(const ModelSet& models, const std::vector<Call>& calls);
SummaryStats predict_performance(const SummaryStats& runtime, long long cost);
SummaryStats predict_efficiency(const SummaryStats& performance, const MachineSpec& machine,
                                int threads);
AccuracyReport accuracy(const SummaryStats& pred, const SummaryStats& meas);

Prediction predict_algorithm(const ModelSet& models, const MachineSpec& machine, int threads,
                             const std::string& algorithm, long n, long b);

struct RankedAlgorithm {
    std::string name;
    Prediction prediction;
};

// ascending predicted median runtime; ties keep input order
std::vector<RankedAlgorithm> rank_algorithms(const ModelSet& models, const MachineSpec& machine,
                                             int threads, const std::vector<std::string>& algorithms,
                                             long n, long b);

struct BlocksizeSweep {
    long b_pred = 0;
    std::vector<long> blocks;
    std::vector<Prediction> predictions;
};

// b_pred = argmin of predicted median runtime over the grid; first minimizer
// wins ties
BlocksizeSweep optimize_blocksize(const ModelSet& models, const MachineSpec& machine, int threads,
                                  const std::string& algorithm, long n, long b_min, long b_max,
                                  long b_step);

// measured runtime at the empirical optimum over measured runtime at b_pred
double performance_yield(const std::vector<long>& blocks, const std::vector<double>& measured_median,
                         long b_pred);

// measurement utility for accuracy studies: times the expanded call sequence
SummaryStats measure_algorithm(Sampler& sampler, const std::string& algorithm, long n, long b,
                               int repetitions, std::uint64_t seed = 42);

}  // namespace dlap
