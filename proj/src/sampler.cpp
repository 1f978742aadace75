#include "dlap/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace dlap {

SummaryStats& SummaryStats::operator+=(const SummaryStats& o) {
    min += o.min;
    median += o.median;
    max += o.max;
    mean += o.mean;
    stddev = std::sqrt(stddev * stddev + o.stddev * o.stddev);
    return *this;
}

SummaryStats summarize(std::vector<double> t) {
    if (t.empty()) throw std::invalid_argument("summarize: empty sample");
    std::sort(t.begin(), t.end());
    SummaryStats s;
    s.min = t.front();
    s.max = t.back();
    size_t n = t.size();
    s.median = n % 2 ? t[n / 2] : 0.5 * (t[n / 2 - 1] + t[n / 2]);
    double sum = 0;
    for (double v : t) sum += v;
    s.mean = sum / (double)n;
    double ss = 0;
    for (double v : t) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / (double)n);  // population convention
    return s;
}

std::vector<size_t> shuffled_indices(size_t n, std::uint64_t seed) {
    std::vector<size_t> idx(n);
    for (size_t i = 0; i < n; ++i) idx[i] = i;
    std::mt19937_64 rng(seed);
    // explicit bounded draw keeps the permutation identical across platforms
    for (size_t i = n; i > 1; --i) {
        size_t j = (size_t)(rng() % i);
        std::swap(idx[i - 1], idx[j]);
    }
    return idx;
}

Sampler::Sampler(Backend& backend, double base_frequency_hz) : backend_(backend) {
    if (base_frequency_hz > 0 && CycleClock::available()) cycle_.emplace(base_frequency_hz);
}

Clock& Sampler::pick_clock(TimerKind kind) {
    if (Clock* c = backend_.clock()) return *c;  // synthetic time
    if (kind == TimerKind::CycleCounter) {
        if (!cycle_) throw std::runtime_error("cycle counter requested but unavailable (machine base frequency not set)");
        return *cycle_;
    }
    return steady_;
}

std::vector<std::vector<double>> Sampler::run_plan(const MeasurementPlan& plan, BufferStore& store) {
    if (plan.repetitions < 1) throw std::invalid_argument("run_plan: repetitions must be >= 1");
    for (const auto& c : plan.calls) kernel(c.kernel).validate(c);
    Clock& clock = pick_clock(plan.timer);

    const size_t n = plan.calls.size();
    std::vector<std::vector<double>> out(n);
    for (auto& v : out) v.reserve((size_t)plan.repetitions);

    if (plan.warm == WarmPolicy::ExplicitWarm)
        for (const auto& c : plan.calls) backend_.execute(c, store);

    std::vector<size_t> order(n * (size_t)plan.repetitions);
    for (size_t i = 0; i < order.size(); ++i) order[i] = i % n;
    if (plan.shuffle) {
        auto perm = shuffled_indices(order.size(), plan.seed);
        std::vector<size_t> shuffled(order.size());
        for (size_t i = 0; i < order.size(); ++i) shuffled[i] = order[perm[i]];
        order.swap(shuffled);
    }

    for (size_t ci : order) {
        const Call& c = plan.calls[ci];
        if (plan.warm == WarmPolicy::DoubleExecution) backend_.execute(c, store);
        std::uint64_t t0 = clock.now_ticks();
        backend_.execute(c, store);
        std::uint64_t t1 = clock.now_ticks();
        out[ci].push_back((double)(t1 - t0) * clock.tick_seconds());
    }
    return out;
}

void Sampler::apply_precondition(const CachePrecondition& pre, BufferStore& store) {
    constexpr long long kLine = 64;
    for (const auto& a : pre.accesses) {
        if (a.remote) {
            if (a.bytes <= 0) throw std::invalid_argument("remote access size must be positive");
            if (a.bytes > scratch_bytes_)
                throw std::invalid_argument("scratch buffer smaller than remote access");
            if (!store.has("__scratch")) store.alloc("__scratch", (size_t)(scratch_bytes_ / 8));
            double* scratch = store.get("__scratch");
            long long elems = scratch_bytes_ / 8;
            // line-stride writes over a.bytes distinct bytes, rotating cursor
            long long todo = a.bytes / kLine + (a.bytes % kLine ? 1 : 0);
            for (long long i = 0; i < todo; ++i) {
                long long e = (scratch_cursor_ + i * (kLine / 8)) % elems;
                scratch[e] += 1e-30;
            }
            scratch_cursor_ = (scratch_cursor_ + todo * (kLine / 8)) % elems;
            if (observer_) observer_("remote", a.bytes);
        } else {
            double* base = store.get(a.operand.buffer);
            long long elems = std::min<long long>(a.bytes / 8, (long long)store.size(a.operand.buffer) -
                                                                   a.operand.offset);
            for (long long i = 0; i < elems; i += kLine / 8) base[a.operand.offset + i] += 0.0;
            if (elems > 0) base[a.operand.offset + elems - 1] += 0.0;
            if (observer_) observer_(a.operand.buffer + (a.operand.block.empty() ? "" : ":" + a.operand.block),
                                     a.bytes);
        }
    }
}

std::vector<double> Sampler::run_with_precondition(const Call& call, const CachePrecondition& pre,
                                                   int repetitions, BufferStore& store) {
    if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
    kernel(call.kernel).validate(call);
    Clock& clock = pick_clock(TimerKind::Monotonic);
    std::vector<double> out;
    out.reserve((size_t)repetitions);
    for (int r = 0; r < repetitions; ++r) {
        apply_precondition(pre, store);
        std::uint64_t t0 = clock.now_ticks();
        backend_.execute(call, store);
        std::uint64_t t1 = clock.now_ticks();
        out.push_back((double)(t1 - t0) * clock.tick_seconds());
    }
    return out;
}

}  // namespace dlap
