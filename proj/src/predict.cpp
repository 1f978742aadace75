#include "dlap/predict.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dlap {

SummaryStats predict_runtime(const ModelSet& models, const std::vector<Call>& calls) {
    SummaryStats total;
    for (const Call& c : calls) total += models.estimate(c);
    return total;
}

SummaryStats predict_performance(const SummaryStats& t, long long cost) {
    SummaryStats p;
    if (cost == 0) return p;
    if (t.min <= 0 || t.median <= 0 || t.max <= 0 || t.mean <= 0)
        throw std::domain_error("predict_performance: runtime statistics must be positive");
    double c = (double)cost;
    p.min = c / t.max;
    p.median = c / t.median;
    p.max = c / t.min;
    double rel = t.stddev / t.mean;
    p.mean = c / t.mean * (1.0 + rel * rel);
    p.stddev = c * t.stddev / (t.mean * t.mean);
    return p;
}

SummaryStats predict_efficiency(const SummaryStats& p, const MachineSpec& machine, int threads) {
    double peak = machine.peak_performance(threads);
    if (peak <= 0) throw std::domain_error("peak performance must be positive");
    return SummaryStats{p.min / peak, p.median / peak, p.max / peak, p.mean / peak, p.stddev / peak};
}

AccuracyReport accuracy(const SummaryStats& pred, const SummaryStats& meas) {
    auto one = [](double p, double m, double& err, double& re, double& are) {
        err = p - m;
        if (m == 0) throw std::domain_error("accuracy: zero measurement in relative error");
        re = err / m;
        are = std::fabs(re);
    };
    AccuracyReport r;
    one(pred.min, meas.min, r.err.min, r.re.min, r.are.min);
    one(pred.median, meas.median, r.err.median, r.re.median, r.are.median);
    one(pred.max, meas.max, r.err.max, r.re.max, r.are.max);
    one(pred.mean, meas.mean, r.err.mean, r.re.mean, r.are.mean);
    one(pred.stddev, meas.stddev, r.err.stddev, r.re.stddev, r.are.stddev);
    return r;
}

Prediction predict_algorithm(const ModelSet& models, const MachineSpec& machine, int threads,
                             const std::string& name, long n, long b) {
    auto calls = call_sequence(name, n, b);
    Prediction pr;
    for (const Call& c : calls) {
        if (c.pseudo)
            ++pr.unmodeled_pseudo;
        else
            ++pr.call_count;
    }
    pr.cost = algorithm_cost(name, n);
    pr.runtime = predict_runtime(models, calls);
    pr.performance = predict_performance(pr.runtime, pr.cost);
    pr.efficiency = predict_efficiency(pr.performance, machine, threads);
    return pr;
}

std::vector<RankedAlgorithm> rank_algorithms(const ModelSet& models, const MachineSpec& machine,
                                             int threads, const std::vector<std::string>& algorithms,
                                             long n, long b) {
    std::vector<RankedAlgorithm> out;
    for (const auto& name : algorithms)
        out.push_back({name, predict_algorithm(models, machine, threads, name, n, b)});
    std::stable_sort(out.begin(), out.end(), [](const RankedAlgorithm& a, const RankedAlgorithm& b2) {
        return a.prediction.runtime.median < b2.prediction.runtime.median;
    });
    return out;
}

BlocksizeSweep optimize_blocksize(const ModelSet& models, const MachineSpec& machine, int threads,
                                  const std::string& name, long n, long b_min, long b_max,
                                  long b_step) {
    if (b_min < 1 || b_max < b_min || b_step < 1)
        throw std::invalid_argument("optimize_blocksize: empty or invalid block size range");
    BlocksizeSweep sweep;
    double best = 0;
    for (long b = b_min; b <= b_max; b += b_step) {
        sweep.blocks.push_back(b);
        sweep.predictions.push_back(predict_algorithm(models, machine, threads, name, n, b));
        double med = sweep.predictions.back().runtime.median;
        if (sweep.blocks.size() == 1 || med < best) {
            best = med;
            sweep.b_pred = b;
        }
    }
    return sweep;
}

double performance_yield(const std::vector<long>& blocks, const std::vector<double>& measured_median,
                         long b_pred) {
    if (blocks.size() != measured_median.size() || blocks.empty())
        throw std::invalid_argument("yield: blocks/measurements mismatch");
    double t_pred = -1, t_opt = -1;
    for (size_t i = 0; i < blocks.size(); ++i) {
        if (t_opt < 0 || measured_median[i] < t_opt) t_opt = measured_median[i];
        if (blocks[i] == b_pred) t_pred = measured_median[i];
    }
    if (t_pred < 0) throw std::invalid_argument("yield: b_pred not in the measured grid");
    return t_opt / t_pred;
}

namespace {

// the one inline pseudo update in the library: A12 := A12 - W2'
void execute_pseudo(const Call& c, BufferStore& store) {
    long w = c.sizes[0], r = c.sizes[1];
    double* a = store.get(c.operands[0].buffer) + c.operands[0].offset;
    double* w2 = store.get(c.operands[1].buffer) + c.operands[1].offset;
    long lda = c.lds[0], ldw = c.lds[1];
    for (long j = 0; j < r; ++j)
        for (long i = 0; i < w; ++i) a[i + j * lda] -= w2[j + i * ldw];
}

}  // namespace

SummaryStats measure_algorithm(Sampler& sampler, const std::string& name, long n, long b,
                               int repetitions, std::uint64_t seed) {
    BufferStore store;
    std::vector<double> timings;
    Clock* synth = sampler.backend().clock();
    SteadyClock steady;
    Clock& clock = synth ? *synth : static_cast<Clock&>(steady);
    for (int rep = 0; rep < repetitions; ++rep) {
        prepare_buffers(name, n, n, b, store, seed);
        auto calls = call_sequence(name, n, b);
        std::uint64_t t0 = clock.now_ticks();
        for (const Call& c : calls) {
            if (c.pseudo)
                execute_pseudo(c, store);
            else
                sampler.backend().execute(c, store);
        }
        std::uint64_t t1 = clock.now_ticks();
        timings.push_back((double)(t1 - t0) * clock.tick_seconds());
    }
    return summarize(timings);
}

}  // namespace dlap
