#include "dlap/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dlap/linalg.hpp"
#include "json.hpp"

namespace dlap {

void ModelConfig::validate() const {
    if (overfitting < 0 || overfitting > 2) throw std::invalid_argument("overfitting must be 0..2");
    if (oversampling < 1) throw std::invalid_argument("oversampling must be >= 1");
    if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
    if (error_bound <= 0) throw std::invalid_argument("error bound must be > 0");
    if (min_width < 8 || min_width % 8 != 0)
        throw std::invalid_argument("minimum width must be a multiple of 8 and >= 8");
}

ModelConfig default_config(const std::string& kernel, int threads) {
    ModelConfig c;  // overfit 2, oversample 4, Chebyshev, 10 reps, min, max, 1%, width 32
    if (kernel == "dgemm") {
        c.overfitting = 0;
        c.min_width = 64;
    }
    if (threads > 1) c.min_width = kernel == "dgemm" ? 256 : 64;
    return c;
}

bool Domain::contains(const std::vector<long>& x) const {
    if (x.size() != bounds.size()) return false;
    for (size_t i = 0; i < bounds.size(); ++i)
        if (x[i] < bounds[i][0] || x[i] > bounds[i][1]) return false;
    return true;
}

void Domain::validate() const {
    if (bounds.empty()) throw std::invalid_argument("domain must have at least one dimension");
    for (const auto& b : bounds) {
        if (b[0] < 8 || b[0] > b[1]) throw std::invalid_argument("domain bounds must satisfy 8 <= lo <= hi");
        if (b[0] % 8 || b[1] % 8) throw std::invalid_argument("domain bounds must be multiples of 8");
    }
}

ScalarClass classify_scalar(double v) {
    if (v == -1.0) return ScalarClass::MinusOne;
    if (v == 0.0) return ScalarClass::Zero;
    if (v == 1.0) return ScalarClass::One;
    return ScalarClass::Other;
}

IncClass classify_increment(long inc) { return inc == 1 ? IncClass::One : IncClass::Large; }

char scalar_class_code(ScalarClass c) {
    switch (c) {
        case ScalarClass::MinusOne: return 'm';
        case ScalarClass::Zero: return '0';
        case ScalarClass::One: return '1';
        case ScalarClass::Other: return '*';
    }
    return '?';
}

char inc_class_code(IncClass c) { return c == IncClass::One ? '1' : 'L'; }

KernelCase KernelCase::of(const Call& call) {
    KernelCase k;
    k.flags = call.flags;
    for (double s : call.scalars) k.scalars.push_back(classify_scalar(s));
    for (long i : call.incs) k.incs.push_back(classify_increment(i));
    return k;
}

std::string KernelCase::key() const {
    std::string s(flags.begin(), flags.end());
    s += '/';
    for (auto c : scalars) s += scalar_class_code(c);
    s += '/';
    for (auto c : incs) s += inc_class_code(c);
    return s;
}

bool KernelCase::matches(const Call& call) const {
    if (call.flags != flags) return false;
    if (call.scalars.size() != scalars.size() || call.incs.size() != incs.size()) return false;
    for (size_t i = 0; i < scalars.size(); ++i)
        if (classify_scalar(call.scalars[i]) != scalars[i]) return false;
    for (size_t i = 0; i < incs.size(); ++i)
        if (classify_increment(call.incs[i]) != incs[i]) return false;
    return true;
}

double Monomial::eval(const std::vector<long>& x) const {
    double r = 1;
    for (size_t i = 0; i < powers.size(); ++i)
        for (int p = 0; p < powers[i]; ++p) r *= (double)x[i];
    return r;
}

std::vector<Monomial> monomial_basis(const std::string& kname, const KernelCase& kase,
                                     int overfitting) {
    const auto& k = kernel(kname);
    if (k.size_args.empty()) throw std::invalid_argument(kname + " has no size arguments");
    std::vector<int> degs = k.size_degrees(kase.flags);
    for (int& d : degs) d += overfitting;

    std::vector<Monomial> basis;
    std::vector<int> cur(degs.size(), 0);
    // enumerate the full tensor grid of exponents
    while (true) {
        basis.push_back(Monomial{cur});
        size_t i = 0;
        for (; i < cur.size(); ++i) {
            if (cur[i] < degs[i]) {
                ++cur[i];
                std::fill(cur.begin(), cur.begin() + (long)i, 0);
                break;
            }
        }
        if (i == cur.size()) break;
    }
    std::sort(basis.begin(), basis.end(), [](const Monomial& a, const Monomial& b) {
        int ta = std::accumulate(a.powers.begin(), a.powers.end(), 0);
        int tb = std::accumulate(b.powers.begin(), b.powers.end(), 0);
        if (ta != tb) return ta < tb;
        return a.powers > b.powers;  // within equal total degree: x1 powers first
    });
    return basis;
}

std::vector<double> chebyshev_nodes(int count) {
    if (count < 2) throw std::invalid_argument("chebyshev grid needs at least 2 points");
    std::vector<double> x((size_t)count);
    for (int i = 0; i < count; ++i) x[(size_t)i] = std::cos((double)i * M_PI / (double)(count - 1));
    return x;
}

namespace {
long round8(double x) { return 8 * (long)std::llround(x / 8.0); }
}  // namespace

std::vector<long> grid_axis(long lo, long hi, int count, GridKind kind) {
    if (count < 2) throw std::invalid_argument("grid needs at least 2 points per dimension");
    long distinct = hi / 8 - (lo + 7) / 8 + 1;
    if (count > distinct)
        throw std::invalid_argument("grid count exceeds distinct multiples of 8 in the interval");
    std::vector<long> axis;
    if (kind == GridKind::Cartesian) {
        for (int i = 0; i < count; ++i) {
            double t = (double)i / (double)(count - 1);
            axis.push_back(round8((double)lo + t * (double)(hi - lo)));
        }
    } else {
        double c = 0.5 * (double)(lo + hi), h = 0.5 * (double)(hi - lo);
        for (double u : chebyshev_nodes(count)) axis.push_back(round8(c + h * u));
    }
    std::sort(axis.begin(), axis.end());
    axis.erase(std::unique(axis.begin(), axis.end()), axis.end());
    return axis;
}

std::vector<std::vector<long>> grid_points(const Domain& domain, const std::vector<int>& counts,
                                           GridKind kind) {
    if (counts.size() != domain.dims()) throw std::invalid_argument("grid counts/domain mismatch");
    std::vector<std::vector<long>> axes;
    for (size_t i = 0; i < domain.dims(); ++i)
        axes.push_back(grid_axis(domain.bounds[i][0], domain.bounds[i][1], counts[i], kind));
    std::vector<std::vector<long>> pts;
    std::vector<size_t> ix(axes.size(), 0);
    bool done = false;
    while (!done) {
        std::vector<long> p(axes.size());
        for (size_t i = 0; i < axes.size(); ++i) p[i] = axes[i][ix[i]];
        pts.push_back(std::move(p));
        long d = (long)axes.size() - 1;
        for (; d >= 0; --d) {
            if (++ix[(size_t)d] < axes[(size_t)d].size()) break;
            ix[(size_t)d] = 0;
        }
        done = d < 0;
    }
    return pts;
}

std::vector<double> fit_relative_lsq(const std::vector<std::vector<long>>& points,
                                     const std::vector<double>& values,
                                     const std::vector<Monomial>& basis) {
    const long n = (long)points.size(), m = (long)basis.size();
    if (n < m) throw std::invalid_argument("fit: fewer points than basis monomials");
    for (double v : values)
        if (!(v > 0)) throw std::invalid_argument("fit: values must be strictly positive");
    std::vector<double> a((size_t)(n * m));
    std::vector<double> rhs((size_t)n, 1.0);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < m; ++j)
            a[(size_t)(i + j * n)] = basis[(size_t)j].eval(points[(size_t)i]) / values[(size_t)i];
    return lstsq(std::move(a), n, m, std::move(rhs));
}

double eval_poly(const std::vector<double>& beta, const std::vector<Monomial>& basis,
                 const std::vector<long>& x) {
    double r = 0;
    for (size_t j = 0; j < basis.size(); ++j) r += beta[j] * basis[j].eval(x);
    return r;
}

double leaf_error(const std::vector<std::vector<long>>& points, const std::vector<double>& values,
                  const std::vector<double>& beta, const std::vector<Monomial>& basis,
                  ErrMeasure measure) {
    std::vector<double> e;
    e.reserve(points.size());
    for (size_t i = 0; i < points.size(); ++i)
        e.push_back(std::fabs(values[i] - eval_poly(beta, basis, points[i])) / values[i]);
    switch (measure) {
        case ErrMeasure::Average: return std::accumulate(e.begin(), e.end(), 0.0) / (double)e.size();
        case ErrMeasure::Maximum: return *std::max_element(e.begin(), e.end());
        case ErrMeasure::P90: {
            std::sort(e.begin(), e.end());
            size_t idx = (size_t)std::ceil(0.9 * (double)e.size());
            return e[idx == 0 ? 0 : idx - 1];
        }
    }
    return 0;
}

std::pair<Domain, Domain> split_domain(const Domain& d, long min_width) {
    int s = -1;
    double best = -1;
    for (size_t i = 0; i < d.dims(); ++i) {
        if (d.width(i) <= min_width) continue;
        double ratio = (double)d.bounds[i][1] / (double)d.bounds[i][0];
        if (ratio > best) {
            best = ratio;
            s = (int)i;
        }
    }
    if (s < 0) throw std::invalid_argument("split_domain: no splittable dimension");
    long l = d.bounds[(size_t)s][0], u = d.bounds[(size_t)s][1];
    long m = 8 * ((l + u + 8) / 16);
    Domain left = d, right = d;
    left.bounds[(size_t)s][1] = m;
    right.bounds[(size_t)s][0] = m;
    return {left, right};
}

namespace {

double rep_scalar(ScalarClass c) {
    switch (c) {
        case ScalarClass::MinusOne: return -1.0;
        case ScalarClass::Zero: return 0.0;
        case ScalarClass::One: return 1.0;
        case ScalarClass::Other: return 0.6;
    }
    return 1.0;
}

// fixed large leading dimension; a multiple of 8 but not of 256
long pick_ld(long max_size) {
    long ld = std::max(5000L, ((max_size + 7) / 8) * 8 + 8);
    if (ld % 256 == 0) ld += 8;
    return ld;
}

}  // namespace

Call measurement_call(const std::string& kname, const KernelCase& kase,
                      const std::vector<long>& sizes) {
    const auto& k = kernel(kname);
    Call c;
    c.kernel = kname;
    c.flags = kase.flags;
    c.sizes = sizes;
    long maxs = sizes.empty() ? 0 : *std::max_element(sizes.begin(), sizes.end());
    long ld = pick_ld(maxs);
    for (auto sc : kase.scalars) c.scalars.push_back(rep_scalar(sc));
    for (auto ic : kase.incs) c.incs.push_back(ic == IncClass::One ? 1 : 5000);
    for (size_t i = 0; i < k.data_args.size(); ++i)
        c.operands.push_back(Operand{"__mg" + std::to_string(i), 0, ""});
    c.lds.assign(k.ld_args.size(), ld);
    k.validate(c);
    return c;
}

namespace {

struct RefineState {
    Sampler& sampler;
    const ModelConfig& config;
    const std::string& kname;
    const KernelCase& kase;
    const std::vector<Monomial>& basis;
    std::vector<int> basis_degs;
    const Domain& root;
    BufferStore store;
    std::uint64_t seed;
    int leaf_counter = 0;
    std::vector<Leaf> leaves;
};

// statistics vector per grid point
std::array<std::vector<double>, kNumStats> measure_grid(RefineState& st,
                                                        const std::vector<std::vector<long>>& pts) {
    MeasurementPlan plan;
    plan.repetitions = st.config.repetitions;
    plan.shuffle = true;
    plan.warm = WarmPolicy::DoubleExecution;
    plan.seed = st.seed + (std::uint64_t)st.leaf_counter * 0x9e3779b97f4a7c15ull;
    for (const auto& p : pts) plan.calls.push_back(measurement_call(st.kname, st.kase, p));
    auto raw = st.sampler.run_plan(plan, st.store);
    std::array<std::vector<double>, kNumStats> stats;
    for (auto& v : stats) v.reserve(pts.size());
    for (const auto& timings : raw) {
        SummaryStats s = summarize(timings);
        stats[0].push_back(s.min);
        stats[1].push_back(s.median);
        stats[2].push_back(s.max);
        stats[3].push_back(s.mean);
        stats[4].push_back(s.stddev);
    }
    return stats;
}

// std may be identically zero under a deterministic backend; fall back to an
// absolute fit there (relative error is undefined at zero)
std::vector<double> fit_statistic(const std::vector<std::vector<long>>& pts,
                                  const std::vector<double>& values,
                                  const std::vector<Monomial>& basis) {
    bool positive = std::all_of(values.begin(), values.end(), [](double v) { return v > 0; });
    if (positive) return fit_relative_lsq(pts, values, basis);
    bool all_zero = std::all_of(values.begin(), values.end(), [](double v) { return v == 0; });
    if (all_zero) return std::vector<double>(basis.size(), 0.0);
    const long n = (long)pts.size(), m = (long)basis.size();
    if (n < m) throw std::invalid_argument("fit: fewer points than basis monomials");
    std::vector<double> a((size_t)(n * m));
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < m; ++j) a[(size_t)(i + j * n)] = basis[(size_t)j].eval(pts[(size_t)i]);
    return lstsq(std::move(a), n, m, std::vector<double>(values));
}

void refine(RefineState& st, const Domain& domain) {
    std::vector<int> counts;
    for (size_t i = 0; i < domain.dims(); ++i) {
        int wanted = st.basis_degs[i] + 1 + st.config.oversampling;
        // narrow leaves hold fewer distinct multiples of 8 than requested
        long distinct = domain.bounds[i][1] / 8 - (domain.bounds[i][0] + 7) / 8 + 1;
        counts.push_back((int)std::min<long>(wanted, distinct));
    }
    auto pts = grid_points(domain, counts, st.config.grid);

    // per-dimension distinct values after rounding must exceed the degree
    for (size_t i = 0; i < domain.dims(); ++i) {
        std::vector<long> vals;
        for (const auto& p : pts) vals.push_back(p[i]);
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        if ((long)vals.size() < st.basis_degs[i] + 2)
            throw std::runtime_error("grid too coarse after rounding for the basis degree");
    }

    ++st.leaf_counter;
    auto stats = measure_grid(st, pts);
    int ref = st.config.reference == RefStat::Min ? 0 : 1;
    auto beta_ref = fit_relative_lsq(pts, stats[(size_t)ref], st.basis);
    double err = leaf_error(pts, stats[(size_t)ref], beta_ref, st.basis, st.config.error_measure);

    bool splittable = false;
    for (size_t i = 0; i < domain.dims(); ++i) splittable |= domain.width(i) > st.config.min_width;

    if (err <= st.config.error_bound || !splittable) {
        Leaf leaf;
        leaf.domain = domain;
        leaf.achieved_error = err;
        leaf.samples = (int)pts.size();
        for (int s = 0; s < kNumStats; ++s)
            leaf.coeffs[(size_t)s] = s == ref ? beta_ref : fit_statistic(pts, stats[(size_t)s], st.basis);
        st.leaves.push_back(std::move(leaf));
        return;
    }
    auto [left, right] = split_domain(domain, st.config.min_width);
    refine(st, left);
    refine(st, right);
}

}  // namespace

PiecewiseModel adaptive_refine(Sampler& sampler, const ModelConfig& config,
                               const std::string& kname, const KernelCase& kase,
                               const Domain& domain, std::uint64_t seed) {
    config.validate();
    domain.validate();
    const auto& k = kernel(kname);
    if (domain.dims() != k.size_args.size())
        throw std::invalid_argument("domain dimensionality does not match the kernel's size arguments");

    PiecewiseModel model;
    model.kernel = kname;
    model.kase = kase;
    model.basis = monomial_basis(kname, kase, config.overfitting);
    model.root = domain;
    model.config = config;
    model.seed = seed;

    RefineState st{sampler, config, kname, kase, model.basis, k.size_degrees(kase.flags),
                   domain, BufferStore{}, seed};
    for (int& d : st.basis_degs) d += config.overfitting;

    // real backends execute the calls; give them initialized operands
    if (sampler.backend().clock() == nullptr) {
        long maxs = 0;
        for (const auto& b : domain.bounds) maxs = std::max(maxs, b[1]);
        long ld = pick_ld(maxs);
        for (size_t i = 0; i < k.data_args.size(); ++i) {
            const auto& spec = k.args[k.data_args[i]];
            std::string name = "__mg" + std::to_string(i);
            if (spec.name == "ipiv") {
                st.store.alloc_int(name, (size_t)maxs + 8);
                continue;
            }
            size_t elems = (size_t)ld * (size_t)(maxs + 8);
            double* p = st.store.alloc(name, elems);
            std::uint64_t h = 0x853c49e6748fea9bull + i;
            for (size_t e = 0; e < elems; ++e) {
                h = h * 6364136223846793005ull + 1442695040888963407ull;
                p[e] = 0.25 + 0.5 * (double)(h >> 40) / (double)(1 << 24);
            }
            // strong diagonal keeps triangular solves and factorizations sane
            double diag = (double)(maxs + 1) * (1.0 + 0.37 * (double)i);
            for (long d = 0; d < maxs + 8; ++d) p[(size_t)d * (size_t)ld + (size_t)d] = diag;
        }
    }

    refine(st, domain);
    model.leaves = std::move(st.leaves);
    return model;
}

const Leaf& PiecewiseModel::locate(const std::vector<long>& sizes) const {
    for (const auto& leaf : leaves) {
        bool ok = true;
        for (size_t i = 0; i < sizes.size() && ok; ++i) {
            long lo = leaf.domain.bounds[i][0], hi = leaf.domain.bounds[i][1];
            bool at_global_max = sizes[i] == root.bounds[i][1] && hi == root.bounds[i][1];
            ok = sizes[i] >= lo && (sizes[i] < hi || at_global_max);
        }
        if (ok) return leaf;
    }
    throw std::out_of_range("no leaf contains the requested sizes");
}

SummaryStats PiecewiseModel::evaluate(const Call& call) const {
    if (call.kernel != kernel) throw std::invalid_argument("call/model kernel mismatch");
    if (!kase.matches(call)) throw std::invalid_argument("call does not match the modeled case");
    if (!root.contains(call.sizes)) throw std::out_of_range("call sizes outside the model domain");
    const Leaf& leaf = locate(call.sizes);
    auto ev = [&](int s) {
        return std::max(0.0, eval_poly(leaf.coeffs[(size_t)s], basis, call.sizes));
    };
    SummaryStats out;
    out.min = ev(0);
    out.median = ev(1);
    out.max = ev(2);
    out.mean = ev(3);
    out.stddev = ev(4);
    return out;
}

const PiecewiseModel* ModelSet::find(const Call& call) const {
    for (const auto& m : models)
        if (m.kernel == call.kernel && m.kase.matches(call) && m.root.contains(call.sizes)) return &m;
    return nullptr;
}

SummaryStats ModelSet::estimate(const Call& call) const {
    if (call.pseudo || call.zero_extent()) return SummaryStats::zero();
    const PiecewiseModel* m = find(call);
    // pivoting performs no flops; without a model it is carried at zero
    if (!m && call.kernel == "dlaswp") return SummaryStats::zero();
    if (!m) throw std::out_of_range("no model covers call to " + call.kernel);
    return m->evaluate(call);
}

// ---- persistence ----

namespace {

using json = nlohmann::ordered_json;

const char* grid_name(GridKind g) { return g == GridKind::Cartesian ? "cartesian" : "chebyshev"; }
const char* ref_name(RefStat r) { return r == RefStat::Min ? "min" : "median"; }
const char* measure_name(ErrMeasure m) {
    switch (m) {
        case ErrMeasure::Average: return "average";
        case ErrMeasure::Maximum: return "maximum";
        case ErrMeasure::P90: return "p90";
    }
    return "?";
}

json config_to_json(const ModelConfig& c) {
    return json{{"overfitting", c.overfitting},
                {"oversampling", c.oversampling},
                {"grid", grid_name(c.grid)},
                {"repetitions", c.repetitions},
                {"reference_statistic", ref_name(c.reference)},
                {"error_measure", measure_name(c.error_measure)},
                {"error_bound", c.error_bound},
                {"min_width", c.min_width}};
}

ModelConfig config_from_json(const json& j) {
    ModelConfig c;
    c.overfitting = j.at("overfitting");
    c.oversampling = j.at("oversampling");
    c.grid = j.at("grid") == "cartesian" ? GridKind::Cartesian : GridKind::Chebyshev;
    c.repetitions = j.at("repetitions");
    c.reference = j.at("reference_statistic") == "min" ? RefStat::Min : RefStat::Median;
    std::string m = j.at("error_measure");
    c.error_measure = m == "average" ? ErrMeasure::Average
                      : m == "p90"   ? ErrMeasure::P90
                                     : ErrMeasure::Maximum;
    c.error_bound = j.at("error_bound");
    c.min_width = j.at("min_width");
    return c;
}

json domain_to_json(const Domain& d) {
    json out = json::array();
    for (const auto& b : d.bounds) out.push_back(json::array({b[0], b[1]}));
    return out;
}

Domain domain_from_json(const json& j) {
    Domain d;
    for (const auto& b : j) d.bounds.push_back({(long)b[0], (long)b[1]});
    return d;
}

}  // namespace

std::string save_models(const ModelSet& set) {
    json root;
    root["format_version"] = 1;
    root["machine"] = set.machine;
    root["backend"] = set.backend_id;
    root["threads"] = set.threads;
    root["seed"] = set.seed;
    // case models grouped per kernel, preserving generation order
    json models = json::array();
    std::vector<std::string> kernel_order;
    std::map<std::string, json> cases_by_kernel;
    for (const auto& m : set.models) {
        if (!cases_by_kernel.count(m.kernel)) {
            kernel_order.push_back(m.kernel);
            cases_by_kernel[m.kernel] = json::array();
        }
        json jc;
        jc["flags"] = std::string(m.kase.flags.begin(), m.kase.flags.end());
        std::string sc, ic;
        for (auto s : m.kase.scalars) sc += scalar_class_code(s);
        for (auto i : m.kase.incs) ic += inc_class_code(i);
        jc["scalar_classes"] = sc;
        jc["increment_classes"] = ic;
        json basis = json::array();
        for (const auto& mono : m.basis) basis.push_back(mono.powers);
        json leaves = json::array();
        for (const auto& l : m.leaves) {
            json jl;
            jl["bounds"] = domain_to_json(l.domain);
            jl["basis"] = basis;
            json cs = json::array();
            for (const auto& c : l.coeffs) cs.push_back(c);
            jl["coefficients"] = cs;
            jl["achieved_error"] = l.achieved_error;
            jl["samples"] = l.samples;
            leaves.push_back(std::move(jl));
        }
        jc["root"] = domain_to_json(m.root);
        jc["domains"] = std::move(leaves);
        jc["config"] = config_to_json(m.config);
        jc["seed"] = m.seed;
        cases_by_kernel[m.kernel].push_back(std::move(jc));
    }
    for (const auto& kname : kernel_order) {
        json jm;
        jm["kernel"] = kname;
        jm["cases"] = cases_by_kernel[kname];
        models.push_back(std::move(jm));
    }
    root["models"] = std::move(models);
    return root.dump(2) + "\n";
}

ModelSet load_models(const std::string& text) {
    json root = json::parse(text);
    if ((int)root.at("format_version") != 1) throw std::runtime_error("unsupported model file version");
    ModelSet set;
    set.machine = root.at("machine");
    set.backend_id = root.at("backend");
    set.threads = root.at("threads");
    set.seed = root.at("seed");
    for (const auto& jm : root.at("models")) {
        for (const auto& jc : jm.at("cases")) {
            PiecewiseModel m;
            m.kernel = jm.at("kernel");
            std::string fl = jc.at("flags");
            m.kase.flags.assign(fl.begin(), fl.end());
            for (char c : std::string(jc.at("scalar_classes"))) {
                switch (c) {
                    case 'm': m.kase.scalars.push_back(ScalarClass::MinusOne); break;
                    case '0': m.kase.scalars.push_back(ScalarClass::Zero); break;
                    case '1': m.kase.scalars.push_back(ScalarClass::One); break;
                    default: m.kase.scalars.push_back(ScalarClass::Other); break;
                }
            }
            for (char c : std::string(jc.at("increment_classes")))
                m.kase.incs.push_back(c == '1' ? IncClass::One : IncClass::Large);
            m.config = config_from_json(jc.at("config"));
            m.seed = jc.at("seed");
            m.root = domain_from_json(jc.at("root"));
            bool basis_loaded = false;
            for (const auto& jl : jc.at("domains")) {
                if (!basis_loaded) {
                    for (const auto& jb : jl.at("basis"))
                        m.basis.push_back(Monomial{jb.get<std::vector<int>>()});
                    basis_loaded = true;
                }
                Leaf l;
                l.domain = domain_from_json(jl.at("bounds"));
                l.achieved_error = jl.at("achieved_error");
                l.samples = jl.at("samples");
                const auto& cs = jl.at("coefficients");
                for (int s = 0; s < kNumStats; ++s)
                    l.coeffs[(size_t)s] = cs[(size_t)s].get<std::vector<double>>();
                m.leaves.push_back(std::move(l));
            }
            set.models.push_back(std::move(m));
        }
    }
    return set;
}

}  // namespace dlap
