#include "dlap/cachemodel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dlap/blocked.hpp"
#include "dlap/sampler.hpp"

namespace dlap {

std::string region_id(const OperandRegion& r) {
    return r.buffer + "@" + std::to_string(r.offset) + "#" + std::to_string(r.elems);
}

double smoothing_f(double r, const SmoothingParams& p) {
    return r >= 0 ? std::tanh(p.alpha * r) : std::tanh(p.beta * r);
}

std::vector<AccessBatch> split_records(const Call& call, long long cache_bytes, double threshold) {
    std::vector<AccessBatch> out;
    if (call.pseudo || call.zero_extent()) return out;
    auto regions = kernel(call.kernel).operands(call);
    long long in_bytes = 0, out_bytes = 0;
    for (const auto& r : regions) (r.dir == DataDir::In ? in_bytes : out_bytes) += 8 * r.elems;
    bool split = out_bytes > 0 && in_bytes > cache_bytes &&
                 (double)out_bytes <= threshold * (double)in_bytes;
    AccessBatch inputs, outputs;
    for (const auto& r : regions) {
        AccessRecord rec{region_id(r), 8 * r.elems, r.dir};
        if (split && r.dir != DataDir::In)
            outputs.records.push_back(std::move(rec));
        else
            inputs.records.push_back(std::move(rec));
    }
    if (!inputs.records.empty()) out.push_back(std::move(inputs));
    if (!outputs.records.empty()) out.push_back(std::move(outputs));
    return out;
}

long long access_distance(const std::vector<Call>& sequence, size_t index,
                          const OperandRegion& target, size_t history_calls,
                          long long fallback_bytes, long long cache_bytes,
                          double split_threshold) {
    if (index >= sequence.size()) throw std::out_of_range("access_distance: index out of range");
    const std::string id = region_id(target);
    long long sum = 0;
    size_t scanned = 0;
    for (size_t j = index; j-- > 0;) {
        if (scanned++ >= history_calls) break;
        auto batches = split_records(sequence[j], cache_bytes, split_threshold);
        for (auto bit = batches.rbegin(); bit != batches.rend(); ++bit) {
            bool found = false;
            long long others = 0;
            for (const auto& rec : bit->records) {
                if (rec.id == id)
                    found = true;
                else
                    others += rec.bytes;
            }
            if (found) return sum + others;
            sum += others;
        }
    }
    return fallback_bytes;
}

double initial_estimate(double s_ic, double s_oc, double t_ic, double t_oc) {
    if (s_ic + s_oc <= 0) throw std::domain_error("initial_estimate: zero operand mass");
    return (s_ic * t_ic + s_oc * t_oc) / (s_ic + s_oc);
}

std::pair<double, double> smooth_weights(const std::vector<WeightedOperand>& ops,
                                         const SmoothingParams& p, bool smooth) {
    double s_ic = 0, s_oc = 0;
    for (const auto& o : ops) {
        double f;
        if (smooth)
            f = smoothing_f(o.rel_distance, p);
        else
            f = o.rel_distance > 0 ? 1.0 : o.rel_distance < 0 ? -1.0 : 0.0;
        s_ic += 0.5 * (1.0 + f) * o.bytes;
        s_oc += 0.5 * (1.0 - f) * o.bytes;
    }
    return {s_ic, s_oc};
}

std::string call_identity(const Call& c) {
    std::string s = c.kernel + ":";
    s.append(c.flags.begin(), c.flags.end());
    for (long v : c.sizes) s += "," + std::to_string(v);
    return s;
}

CombinedEstimates combined_estimates(const std::string& algorithm, long n, long b,
                                     const std::map<std::string, double>& t_ic,
                                     const std::map<std::string, double>& t_oc,
                                     long long cache_bytes, const SmoothingParams& params,
                                     bool smooth) {
    if (cache_bytes <= 0) throw std::invalid_argument("cache size must be positive");
    auto seq = call_sequence(algorithm, n, b);
    long steps = (n + b - 1) / b;
    size_t history = steps > 0 ? (seq.size() + (size_t)steps - 1) / (size_t)steps : seq.size();

    // fallback: total footprint of all algorithm operands
    std::map<std::string, long long> extents;
    for (const auto& c : seq) {
        if (c.pseudo || c.zero_extent()) continue;
        for (const auto& r : kernel(c.kernel).operands(c))
            extents[r.buffer] = std::max(extents[r.buffer], r.offset + r.elems);
    }
    long long fallback = 0;
    for (const auto& [buf, e] : extents) fallback += 8 * e;

    CombinedEstimates out;
    for (size_t i = 0; i < seq.size(); ++i) {
        const Call& c = seq[i];
        CallEstimate est;
        est.index = i;
        est.kernel = c.kernel;
        est.identity = call_identity(c);
        if (c.pseudo || c.zero_extent()) {
            out.per_call.push_back(est);
            continue;
        }
        std::vector<WeightedOperand> ops;
        for (const auto& r : kernel(c.kernel).operands(c)) {
            long long d = access_distance(seq, i, r, history, fallback, cache_bytes,
                                          params.split_threshold);
            ops.push_back({8.0 * (double)r.elems,
                           ((double)cache_bytes - (double)d) / (double)cache_bytes});
        }
        auto [s_ic, s_oc] = smooth_weights(ops, params, smooth);
        est.s_ic = s_ic;
        est.s_oc = s_oc;
        auto ic = t_ic.find(est.identity), oc = t_oc.find(est.identity);
        if (ic == t_ic.end() || oc == t_oc.end())
            throw std::out_of_range("missing in-/out-of-cache timing for " + est.identity);
        est.t_est = initial_estimate(s_ic, s_oc, ic->second, oc->second);
        out.per_call.push_back(est);
        out.total += est.t_est;
    }
    return out;
}

std::pair<std::map<std::string, double>, std::map<std::string, double>> measure_cache_timings(
    Sampler& sampler, const std::string& algorithm, long n, long b, long long cache_bytes,
    int repetitions) {
    BufferStore store;
    prepare_buffers(algorithm, n, n, b, store);
    std::map<std::string, double> t_ic, t_oc;
    for (const Call& c : call_sequence(algorithm, n, b)) {
        if (c.pseudo || c.zero_extent()) continue;
        std::string id = call_identity(c);
        if (t_ic.count(id)) continue;
        CachePrecondition warm, cold;
        for (const auto& r : kernel(c.kernel).operands(c))
            if (r.dir == DataDir::In)
                warm.accesses.push_back({false, Operand{r.buffer, r.offset}, 8 * r.elems});
        cold.accesses.push_back({true, {}, 2 * cache_bytes});
        t_ic[id] = summarize(sampler.run_with_precondition(c, warm, repetitions, store)).median;
        t_oc[id] = summarize(sampler.run_with_precondition(c, cold, repetitions, store)).median;
    }
    return {t_ic, t_oc};
}

std::string estimate_report(const CombinedEstimates& est) {
    std::ostringstream os;
    os.precision(9);
    os << "index\tkernel\tidentity\ts_ic\ts_oc\tt_est\n";
    for (const auto& e : est.per_call)
        os << e.index << "\t" << e.kernel << "\t" << e.identity << "\t" << e.s_ic << "\t" << e.s_oc
           << "\t" << e.t_est << "\n";
    return os.str();
}

}  // namespace dlap
