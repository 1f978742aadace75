#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dlap/backend.hpp"
#include "dlap/blocked.hpp"
#include "dlap/cachemodel.hpp"
#include "dlap/model.hpp"
#include "dlap/predict.hpp"
#include "dlap/sampler.hpp"
#include "dlap/tensor.hpp"

namespace py = pybind11;
using namespace dlap;

namespace {

std::vector<char> to_flags(const std::string& s) { return {s.begin(), s.end()}; }

py::dict stats_dict(const SummaryStats& s) {
    py::dict d;
    d["min"] = s.min;
    d["median"] = s.median;
    d["max"] = s.max;
    d["mean"] = s.mean;
    d["std"] = s.stddev;
    return d;
}

SummaryStats stats_from(const py::dict& d) {
    SummaryStats s;
    s.min = d["min"].cast<double>();
    s.median = d["median"].cast<double>();
    s.max = d["max"].cast<double>();
    s.mean = d["mean"].cast<double>();
    s.stddev = d["std"].cast<double>();
    return s;
}

MachineSpec machine_from(const py::dict& d) {
    MachineSpec m;
    m.name = d.contains("name") ? d["name"].cast<std::string>() : "machine";
    m.base_frequency = d["base_frequency_hz"].cast<double>();
    m.flops_per_cycle = d["flops_per_cycle_per_core"].cast<double>();
    m.cores = d["cores"].cast<int>();
    m.peak_bandwidth = d["peak_bandwidth_bytes_per_s"].cast<double>();
    if (d.contains("caches"))
        for (auto c : d["caches"]) {
            auto cd = c.cast<py::dict>();
            m.caches.push_back({cd["capacity_bytes"].cast<long>(),
                                cd.contains("line_bytes") ? cd["line_bytes"].cast<long>() : 64, 0});
        }
    m.validate();
    return m;
}

}  // namespace

PYBIND11_MODULE(_dlap, m) {
    m.doc() = "dense linear algebra kernel measurement, piecewise runtime models, and "
              "blocked-algorithm / tensor-contraction performance prediction";

    // ---- kernel cost accounting ----
    m.def("kernels", [] {
        std::vector<std::string> names;
        for (const auto& [k, v] : kernel_registry()) names.push_back(k);
        return names;
    });
    m.def(
        "flop_count",
        [](const std::string& kernel, const std::vector<long>& sizes, const std::string& flags) {
            return flop_count(kernel, sizes, to_flags(flags));
        },
        py::arg("kernel"), py::arg("sizes"), py::arg("flags") = "");
    m.def(
        "min_data_movement",
        [](const std::string& kernel, const std::vector<long>& sizes, const std::string& flags) {
            return min_data_movement(kernel, sizes, to_flags(flags));
        },
        py::arg("kernel"), py::arg("sizes"), py::arg("flags") = "");
    m.def(
        "min_data_volume",
        [](const std::string& kernel, const std::vector<long>& sizes, const std::string& flags) {
            return min_data_volume(kernel, sizes, to_flags(flags));
        },
        py::arg("kernel"), py::arg("sizes"), py::arg("flags") = "");
    m.def(
        "arithmetic_intensity",
        [](const std::string& kernel, const std::vector<long>& sizes, const std::string& flags) {
            return arithmetic_intensity(kernel, sizes, to_flags(flags));
        },
        py::arg("kernel"), py::arg("sizes"), py::arg("flags") = "");
    m.def(
        "roofline_limit",
        [](const py::dict& machine, double intensity, int threads) {
            return roofline_limit(machine_from(machine), intensity, threads);
        },
        py::arg("machine"), py::arg("intensity"), py::arg("threads") = 1);

    // ---- summary statistics ----
    m.def("summarize", [](std::vector<double> t) { return stats_dict(summarize(std::move(t))); });

    // ---- blocked algorithms ----
    m.def("algorithms", &algorithm_names);
    m.def(
        "call_sequence",
        [](const std::string& algorithm, long n, long b) {
            py::list out;
            for (const Call& c : call_sequence(algorithm, n, b)) {
                py::dict d;
                d["kernel"] = c.kernel;
                d["flags"] = std::string(c.flags.begin(), c.flags.end());
                d["sizes"] = c.sizes;
                d["scalars"] = c.scalars;
                d["pseudo"] = c.pseudo;
                out.append(d);
            }
            return out;
        },
        py::arg("algorithm"), py::arg("n"), py::arg("b"));
    m.def("algorithm_cost",
          [](const std::string& algorithm, long n) { return algorithm_cost(algorithm, n); });
    m.def(
        "predict_performance",
        [](const py::dict& runtime, long long cost) {
            return stats_dict(predict_performance(stats_from(runtime), cost));
        },
        py::arg("runtime"), py::arg("cost"));
    m.def(
        "predict_efficiency",
        [](const py::dict& performance, const py::dict& machine, int threads) {
            return stats_dict(
                predict_efficiency(stats_from(performance), machine_from(machine), threads));
        },
        py::arg("performance"), py::arg("machine"), py::arg("threads") = 1);

    // ---- model generation against the built-in synthetic backend ----
    m.def(
        "generate_model",
        [](const std::string& kernel_name, const std::string& flags,
           const std::vector<std::pair<long, long>>& domain, std::uint64_t seed) {
            SyntheticBackend backend(synthetic_poly_model());
            Sampler sampler(backend);
            KernelCase kase;
            kase.flags = to_flags(flags);
            const auto& k = kernel(kernel_name);
            kase.scalars.assign(k.scalar_args.size(), ScalarClass::One);
            kase.incs.assign(k.inc_args.size(), IncClass::One);
            Domain d;
            for (auto [lo, hi] : domain) d.bounds.push_back({lo, hi});
            ModelSet set;
            set.machine = "synthetic";
            set.backend_id = "synthetic:poly";
            set.seed = seed;
            set.models.push_back(
                adaptive_refine(sampler, default_config(kernel_name, 1), kernel_name, kase, d, seed));
            return save_models(set);
        },
        py::arg("kernel"), py::arg("flags"), py::arg("domain"), py::arg("seed") = 0,
        "piecewise model JSON generated against the built-in synthetic backend");

    // ---- cache model ----
    m.def(
        "smoothing_f",
        [](double r, double alpha, double beta) {
            SmoothingParams p;
            p.alpha = alpha;
            p.beta = beta;
            return smoothing_f(r, p);
        },
        py::arg("r"), py::arg("alpha") = 4.0, py::arg("beta") = 2.0);
    m.def("initial_estimate", &initial_estimate);

    // ---- tensor contractions ----
    m.def("tensor_algorithms", [](const std::string& text) {
        std::vector<std::string> names;
        for (const auto& a : generate_algorithms(parse_spec(text))) names.push_back(a.name);
        return names;
    });
    m.def(
        "tensor_access_distances",
        [](const std::string& text, const std::string& name) {
            ContractionSpec spec = parse_spec(text);
            for (const auto& a : generate_algorithms(spec)) {
                if (a.name != name) continue;
                py::dict d;
                for (char t : {'A', 'B', 'C'})
                    d[py::str(std::string(1, t))] = access_distance_ast(a, t);
                return d;
            }
            throw std::invalid_argument("no such algorithm: " + name);
        },
        py::arg("contraction"), py::arg("algorithm"));
    m.def(
        "tensor_benchmark_weights",
        [](const std::string& text, const std::string& name) {
            ContractionSpec spec = parse_spec(text);
            for (const auto& a : generate_algorithms(spec))
                if (a.name == name) return benchmark_weights(a);
            throw std::invalid_argument("no such algorithm: " + name);
        },
        py::arg("contraction"), py::arg("algorithm"));
}
