// dlap: measure dense linear algebra kernels, fit piecewise-polynomial
// runtime models, and predict blocked-algorithm and tensor-contraction
// performance without executing the candidates.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dlap/backend.hpp"
#include "dlap/blocked.hpp"
#include "dlap/cachemodel.hpp"
#include "dlap/model.hpp"
#include "dlap/predict.hpp"
#include "dlap/sampler.hpp"
#include "dlap/tensor.hpp"
#include "dlap/textio.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

dlap::MachineSpec load_machine(const std::string& path) {
    if (path.empty()) {
        // generic defaults; timing-free commands do not depend on them
        dlap::MachineSpec m;
        m.name = "generic";
        m.base_frequency = 1e9;
        m.flops_per_cycle = 2;
        m.cores = 1;
        m.peak_bandwidth = 1e10;
        m.caches = {{6 * 1024 * 1024, 64, 0}};
        return m;
    }
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open machine spec: " + path);
    json j = json::parse(in);
    dlap::MachineSpec m;
    m.name = j.at("name");
    m.base_frequency = j.at("base_frequency_hz");
    m.flops_per_cycle = j.at("flops_per_cycle_per_core");
    m.cores = j.at("cores");
    m.peak_bandwidth = j.at("peak_bandwidth_bytes_per_s");
    for (const auto& c : j.at("caches"))
        m.caches.push_back({c.at("capacity_bytes"), c.at("line_bytes"), c.at("associativity")});
    m.validate();
    return m;
}

dlap::ModelConfig parse_config(const dlap::ModelConfig& base, const std::string& overrides) {
    dlap::ModelConfig c = base;
    std::istringstream is(overrides);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw std::runtime_error("config overrides look like key=value");
        std::string k = tok.substr(0, eq), v = tok.substr(eq + 1);
        if (k == "overfitting") c.overfitting = std::stoi(v);
        else if (k == "oversampling") c.oversampling = std::stoi(v);
        else if (k == "grid") c.grid = v == "cartesian" ? dlap::GridKind::Cartesian : dlap::GridKind::Chebyshev;
        else if (k == "repetitions") c.repetitions = std::stoi(v);
        else if (k == "reference") c.reference = v == "median" ? dlap::RefStat::Median : dlap::RefStat::Min;
        else if (k == "error_measure") c.error_measure = v == "average" ? dlap::ErrMeasure::Average
                                                        : v == "p90"   ? dlap::ErrMeasure::P90
                                                                       : dlap::ErrMeasure::Maximum;
        else if (k == "error_bound") c.error_bound = std::stod(v);
        else if (k == "min_width") c.min_width = std::stol(v);
        else throw std::runtime_error("unknown config key: " + k);
    }
    return c;
}

// "RLTN" or "RLTN,alpha=-1,beta=1"
dlap::KernelCase parse_case(const std::string& kname, const std::string& text) {
    const auto& k = dlap::kernel(kname);
    dlap::KernelCase kase;
    std::istringstream is(text);
    std::string tok;
    bool first = true;
    std::map<std::string, double> scalars;
    std::map<std::string, long> incs;
    while (std::getline(is, tok, ',')) {
        if (first && tok.find('=') == std::string::npos) {
            kase.flags.assign(tok.begin(), tok.end());
            first = false;
            continue;
        }
        first = false;
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw std::runtime_error("case entries look like alpha=-1");
        std::string name = tok.substr(0, eq);
        bool is_inc = false;
        for (int ii : k.inc_args) is_inc |= k.args[ii].name == name;
        if (is_inc)
            incs[name] = std::stol(tok.substr(eq + 1));
        else
            scalars[name] = std::stod(tok.substr(eq + 1));
    }
    if (kase.flags.size() != k.flag_args.size())
        throw std::runtime_error(kname + " needs " + std::to_string(k.flag_args.size()) + " flags");
    for (int si : k.scalar_args) {
        auto it = scalars.find(k.args[si].name);
        kase.scalars.push_back(dlap::classify_scalar(it == scalars.end() ? 1.0 : it->second));
    }
    for (int ii : k.inc_args) {
        auto it = incs.find(k.args[ii].name);
        kase.incs.push_back(dlap::classify_increment(it == incs.end() ? 1 : it->second));
    }
    return kase;
}

dlap::Domain parse_domain(const std::vector<std::string>& bounds) {
    dlap::Domain d;
    for (const auto& b : bounds) {
        auto colon = b.find(':');
        if (colon == std::string::npos) throw std::runtime_error("domain bounds look like 24:536");
        d.bounds.push_back({std::stol(b.substr(0, colon)), std::stol(b.substr(colon + 1))});
    }
    d.validate();
    return d;
}

dlap::ModelSet load_model_dir(const std::string& dir) {
    dlap::ModelSet set;
    bool first = true;
    if (!fs::is_directory(dir)) throw std::runtime_error("models dir not found: " + dir);
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& p : files) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        dlap::ModelSet one = dlap::load_models(ss.str());
        if (first) {
            set = one;
            first = false;
        } else {
            for (auto& m : one.models) set.models.push_back(std::move(m));
        }
    }
    if (first) throw std::runtime_error("no model files in " + dir);
    return set;
}

std::string stat_row(const dlap::SummaryStats& s) {
    std::ostringstream os;
    os.precision(9);
    os << s.min << "\t" << s.median << "\t" << s.max << "\t" << s.mean << "\t" << s.stddev;
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dense linear algebra performance modeling and prediction"};
    app.require_subcommand(1);

    std::string machine_path, backend_spec = "reference", models_dir = "models";
    int threads = 1;
    std::uint64_t seed = 0;
    std::string backend_env;
    app.add_option("--machine", machine_path, "machine spec JSON");
    app.add_option("--backend", backend_spec, "reference | synthetic[:model] | /path/to/lib.so");
    app.add_option("--backend-env", backend_env, "thread-count env template, e.g. OPENBLAS_NUM_THREADS={nt}");
    app.add_option("--threads", threads, "thread count")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "shuffle seed");
    app.add_option("--models-dir", models_dir, "model store directory");

    // measure
    auto* measure = app.add_subcommand("measure", "time a call-list script");
    std::string script_path;
    measure->add_option("script", script_path, "call list file (default: stdin)");

    // model-gen
    auto* mgen = app.add_subcommand("model-gen", "generate a piecewise runtime model");
    std::string mg_kernel;
    std::vector<std::string> mg_cases, mg_domain;
    std::string mg_out, mg_overrides;
    mgen->add_option("kernel", mg_kernel, "kernel name")->required();
    mgen->add_option("--case", mg_cases, "flag string plus scalar values, e.g. RLTN,alpha=-1")->required();
    mgen->add_option("--domain", mg_domain, "per-dimension bounds lo:hi")->required();
    mgen->add_option("--config", mg_overrides, "default | key=value,... overrides");
    mgen->add_option("-o,--output", mg_out, "output model file");

    // predict
    auto* pred = app.add_subcommand("predict", "predict one blocked algorithm");
    std::string pr_alg;
    long pr_n = 0, pr_b = 0;
    pred->add_option("algorithm", pr_alg)->required();
    pred->add_option("-n", pr_n, "problem size")->required();
    pred->add_option("-b", pr_b, "block size")->required();

    // rank
    auto* rank = app.add_subcommand("rank", "rank blocked algorithms");
    std::vector<std::string> rk_algs;
    long rk_n = 0, rk_b = 0;
    rank->add_option("algorithms", rk_algs)->required();
    rank->add_option("-n", rk_n)->required();
    rank->add_option("-b", rk_b)->required();

    // blocksize
    auto* bsz = app.add_subcommand("blocksize", "optimize the block size");
    std::string bs_alg;
    long bs_n = 0, bs_min = 0, bs_max = -1, bs_step = 8;
    bsz->add_option("algorithm", bs_alg)->required();
    bsz->add_option("-n", bs_n)->required();
    bsz->add_option("--b-min", bs_min)->required();
    bsz->add_option("--b-max", bs_max)->required();
    bsz->add_option("--b-step", bs_step);

    // tensor-gen
    auto* tgen = app.add_subcommand("tensor-gen", "generate contraction algorithms");
    std::string tg_spec;
    bool tg_render = false;
    tgen->add_option("contraction", tg_spec, "e.g. \"C[a,b,c] = A[a,i] * B[i,b,c]\"")->required();
    tgen->add_flag("--render", tg_render, "print C-like loop nests");

    // tensor-predict
    auto* tpred = app.add_subcommand("tensor-predict", "rank contraction algorithms via micro-benchmarks");
    std::string tp_spec;
    long tp_cache = 6 * 1024 * 1024;
    int tp_reps = 10;
    tpred->add_option("contraction", tp_spec)->required();
    tpred->add_option("--cache", tp_cache, "last-level cache bytes");
    tpred->add_option("--repetitions", tp_reps);

    // export
    auto* exp = app.add_subcommand("export", "validate and re-emit a DSV report");
    std::string ex_in;
    exp->add_option("file", ex_in)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        dlap::MachineSpec machine = load_machine(machine_path);
        auto backend = dlap::open_backend(backend_spec, threads, backend_env);

        if (*measure) {
            std::ifstream fin;
            std::istream* in = &std::cin;
            if (!script_path.empty()) {
                fin.open(script_path);
                if (!fin) throw std::runtime_error("cannot open " + script_path);
                in = &fin;
            }
            dlap::run_call_script(*in, std::cout, *backend, machine.base_frequency);
            return 0;
        }

        if (*mgen) {
            dlap::ModelConfig config = dlap::default_config(mg_kernel, threads);
            if (!mg_overrides.empty() && mg_overrides != "default")
                config = parse_config(config, mg_overrides);
            dlap::Domain domain = parse_domain(mg_domain);
            dlap::Sampler sampler(*backend, machine.base_frequency);
            dlap::ModelSet set;
            set.machine = machine.name;
            set.backend_id = backend->id();
            set.threads = threads;
            set.seed = seed;
            for (const auto& case_text : mg_cases) {
                dlap::KernelCase kase = parse_case(mg_kernel, case_text);
                set.models.push_back(dlap::adaptive_refine(sampler, config, mg_kernel, kase, domain, seed));
            }
            std::string text = dlap::save_models(set);
            if (mg_out.empty()) mg_out = models_dir + "/" + mg_kernel + ".json";
            fs::create_directories(fs::path(mg_out).parent_path().empty() ? "." : fs::path(mg_out).parent_path().string());
            std::ofstream out(mg_out, std::ios::binary);
            out << text;
            std::cout << "wrote " << mg_out << " (" << set.models.size() << " case models)\n";
            return 0;
        }

        if (*pred || *rank || *bsz) {
            dlap::ModelSet models = load_model_dir(models_dir);
            if (*pred) {
                auto p = dlap::predict_algorithm(models, machine, threads, pr_alg, pr_n, pr_b);
                dlap::Table t;
                t.columns = {"algorithm", "n", "b", "statistic", "runtime_s", "perf_flops_s", "efficiency"};
                const char* names[5] = {"min", "median", "max", "mean", "std"};
                double rt[5] = {p.runtime.min, p.runtime.median, p.runtime.max, p.runtime.mean, p.runtime.stddev};
                double pf[5] = {p.performance.min, p.performance.median, p.performance.max, p.performance.mean, p.performance.stddev};
                double ef[5] = {p.efficiency.min, p.efficiency.median, p.efficiency.max, p.efficiency.mean, p.efficiency.stddev};
                for (int i = 0; i < 5; ++i) {
                    std::ostringstream a, b2, c;
                    a.precision(9); b2.precision(9); c.precision(9);
                    a << rt[i]; b2 << pf[i]; c << ef[i];
                    t.rows.push_back({pr_alg, std::to_string(pr_n), std::to_string(pr_b), names[i],
                                      a.str(), b2.str(), c.str()});
                }
                std::cout << t.dsv();
            } else if (*rank) {
                auto ranked = dlap::rank_algorithms(models, machine, threads, rk_algs, rk_n, rk_b);
                dlap::Table t;
                t.columns = {"rank", "algorithm", "t_med_s", "perf_med_flops_s", "eff_med"};
                for (size_t i = 0; i < ranked.size(); ++i) {
                    std::ostringstream a, b2, c;
                    a.precision(9); b2.precision(9); c.precision(9);
                    a << ranked[i].prediction.runtime.median;
                    b2 << ranked[i].prediction.performance.median;
                    c << ranked[i].prediction.efficiency.median;
                    t.rows.push_back({std::to_string(i + 1), ranked[i].name, a.str(), b2.str(), c.str()});
                }
                std::cout << t.dsv();
            } else {
                auto sweep = dlap::optimize_blocksize(models, machine, threads, bs_alg, bs_n, bs_min,
                                                      bs_max, bs_step);
                dlap::Table t;
                t.columns = {"b", "t_med_s", "perf_med_flops_s", "is_b_pred"};
                for (size_t i = 0; i < sweep.blocks.size(); ++i) {
                    std::ostringstream a, b2;
                    a.precision(9); b2.precision(9);
                    a << sweep.predictions[i].runtime.median;
                    b2 << sweep.predictions[i].performance.median;
                    t.rows.push_back({std::to_string(sweep.blocks[i]), a.str(), b2.str(),
                                      sweep.blocks[i] == sweep.b_pred ? "1" : "0"});
                }
                std::cout << t.dsv();
                std::cout << "# b_pred = " << sweep.b_pred << "\n";
            }
            return 0;
        }

        if (*tgen) {
            dlap::ContractionSpec spec = dlap::parse_spec(tg_spec);
            auto algs = dlap::generate_algorithms(spec);
            std::cout << algs.size() << " algorithms\n";
            for (const auto& a : algs) {
                if (tg_render)
                    std::cout << dlap::render_algorithm(a) << "\n";
                else
                    std::cout << a.name << "\n";
            }
            return 0;
        }

        if (*tpred) {
            dlap::ContractionSpec spec = dlap::parse_spec(tp_spec);
            long long cache = machine_path.empty() ? tp_cache : machine.last_level_cache();
            dlap::Sampler sampler(*backend, machine.base_frequency);
            auto ranked = dlap::rank_contractions(spec, sampler, cache, tp_reps);
            dlap::Table t;
            t.columns = {"rank", "algorithm", "t_pred_s", "perf_flops_s"};
            for (size_t i = 0; i < ranked.size(); ++i) {
                std::ostringstream a, b2;
                a.precision(9); b2.precision(9);
                a << ranked[i].runtime;
                b2 << ranked[i].flops_per_s;
                t.rows.push_back({std::to_string(i + 1), ranked[i].name, a.str(), b2.str()});
            }
            std::cout << t.dsv();
            return 0;
        }

        if (*exp) {
            std::ifstream in(ex_in);
            if (!in) throw std::runtime_error("cannot open " + ex_in);
            dlap::Table t = dlap::Table::parse_dsv(in);
            std::cout << t.dsv();
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
