#include "dlap/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dlap {

namespace {

bool contains(const std::vector<char>& v, char c) {
    return std::find(v.begin(), v.end(), c) != v.end();
}

}  // namespace

void ContractionSpec::classify() {
    free_in_a.clear();
    free_in_b.clear();
    contracted.clear();
    auto no_dups = [](const std::vector<char>& v, const char* who) {
        std::set<char> s(v.begin(), v.end());
        if (s.size() != v.size())
            throw std::invalid_argument(std::string("repeated index within tensor ") + who);
    };
    no_dups(c_dims, "C");
    no_dups(a_dims, "A");
    no_dups(b_dims, "B");
    std::set<char> all(a_dims.begin(), a_dims.end());
    all.insert(b_dims.begin(), b_dims.end());
    all.insert(c_dims.begin(), c_dims.end());
    for (char d : all) {
        bool in_a = contains(a_dims, d), in_b = contains(b_dims, d), in_c = contains(c_dims, d);
        if (in_a && in_b) {
            if (in_c)
                throw std::invalid_argument(std::string("index '") + d + "' appears in all three tensors");
            contracted.push_back(d);
        } else if (in_a && in_c) {
            free_in_a.push_back(d);
        } else if (in_b && in_c) {
            free_in_b.push_back(d);
        } else if (in_c) {
            throw std::invalid_argument(std::string("index '") + d + "' appears only in the output");
        } else {
            throw std::invalid_argument(std::string("index '") + d +
                                        "' appears in one operand only and not in the output");
        }
    }
    for (char d : all) {
        if (!extents.count(d)) extents[d] = 8;  // default extent
        if (extents[d] < 1) throw std::invalid_argument("extents must be >= 1");
    }
}

ContractionSpec parse_spec(const std::string& text) {
    ContractionSpec spec;
    auto fail = [&](const std::string& why) {
        throw std::invalid_argument("cannot parse contraction '" + text + "': " + why);
    };
    auto parse_tensor = [&](std::string tok, char expect) -> std::vector<char> {
        auto lb = tok.find('['), rb = tok.find(']');
        if (lb == std::string::npos || rb == std::string::npos || rb < lb)
            fail("expected NAME[i,j,...]");
        std::string name = tok.substr(0, lb);
        if (name.size() != 1 || name[0] != expect)
            fail(std::string("expected tensor ") + expect);
        std::vector<char> dims;
        for (char c : tok.substr(lb + 1, rb - lb - 1)) {
            if (c == ',' || c == ' ') continue;
            if (!std::isalpha((unsigned char)c)) fail("indices must be letters");
            dims.push_back((char)std::tolower((unsigned char)c));
        }
        return dims;
    };

    std::string s = text;
    // split off optional extent bindings ("... ; a=400 b=400" or trailing k=v)
    std::string bindings;
    auto semi = s.find(';');
    if (semi != std::string::npos) {
        bindings = s.substr(semi + 1);
        s = s.substr(0, semi);
    }
    auto eq = s.find('=');
    if (eq == std::string::npos) fail("missing '='");
    std::string lhs = s.substr(0, eq), rhs = s.substr(eq + 1);
    auto star = rhs.find('*');
    if (star == std::string::npos) fail("missing '*'");
    auto strip = [](std::string t) {
        t.erase(std::remove_if(t.begin(), t.end(), [](char c) { return std::isspace((unsigned char)c); }),
                t.end());
        return t;
    };
    spec.c_dims = parse_tensor(strip(lhs), 'C');
    spec.a_dims = parse_tensor(strip(rhs.substr(0, star)), 'A');
    spec.b_dims = parse_tensor(strip(rhs.substr(star + 1)), 'B');

    std::istringstream bs(bindings);
    std::string tok;
    while (bs >> tok) {
        auto e = tok.find('=');
        if (e == std::string::npos || e != 1) fail("extent bindings look like i=8");
        spec.extents[(char)std::tolower((unsigned char)tok[0])] = std::stol(tok.substr(e + 1));
    }
    spec.classify();
    return spec;
}

std::string tensor_kernel_name(TensorKernel k) {
    switch (k) {
        case TensorKernel::Dot: return "dot";
        case TensorKernel::Axpy: return "axpy";
        case TensorKernel::Gemv: return "gemv";
        case TensorKernel::Ger: return "ger";
        case TensorKernel::Gemm: return "gemm";
    }
    return "?";
}

namespace {

const std::vector<char>& dims_of(const ContractionSpec& s, char t) {
    return t == 'A' ? s.a_dims : t == 'B' ? s.b_dims : s.c_dims;
}

const OperandSlice& op_of(const ContractionAlgorithm& alg, char t) {
    return t == 'A' ? alg.opa : t == 'B' ? alg.opb : alg.opc;
}

OperandSlice& op_of(ContractionAlgorithm& alg, char t) {
    return t == 'A' ? alg.opa : t == 'B' ? alg.opb : alg.opc;
}

// a matrix operand needs a copy when neither kernel dim is the tensor's
// first (contiguous) dimension
void resolve_copy(const ContractionSpec& spec, OperandSlice& op) {
    if (op.kdims.size() != 2) return;
    op.needs_copy = !(dims_of(spec, op.tensor)[0] == op.kdims[0] ||
                      dims_of(spec, op.tensor)[0] == op.kdims[1]);
}

void place_copies(ContractionAlgorithm& alg) {
    for (char t : {'A', 'B', 'C'}) {
        OperandSlice& op = op_of(alg, t);
        if (!op.needs_copy) continue;
        op.copy_back = t == 'C';
        op.copy_depth = 0;
        for (size_t d = 0; d < alg.loops.size(); ++d)
            if (contains(dims_of(alg.spec, t), alg.loops[d])) op.copy_depth = (int)d + 1;
    }
}

std::string algorithm_name(const ContractionAlgorithm& alg) {
    std::string n;
    auto apostrophes_at = [&](int depth) {
        int k = 0;
        for (char t : {'A', 'B', 'C'})
            if (op_of(alg, t).needs_copy && op_of(alg, t).copy_depth == depth) ++k;
        return std::string((size_t)k, '\'');
    };
    n += apostrophes_at(0);
    for (size_t d = 0; d < alg.loops.size(); ++d) {
        n += alg.loops[d];
        n += apostrophes_at((int)d + 1);
    }
    n += "-";
    n += tensor_kernel_name(alg.kind);
    return n;
}

void finish(std::vector<ContractionAlgorithm>& out, ContractionAlgorithm alg,
            const std::vector<char>& sliced) {
    std::vector<char> loops = sliced;
    std::sort(loops.begin(), loops.end());
    do {
        ContractionAlgorithm a = alg;
        a.loops = loops;
        resolve_copy(a.spec, a.opa);
        resolve_copy(a.spec, a.opb);
        resolve_copy(a.spec, a.opc);
        place_copies(a);
        a.name = algorithm_name(a);
        out.push_back(std::move(a));
    } while (std::next_permutation(loops.begin(), loops.end()));
}

}  // namespace

std::vector<ContractionAlgorithm> generate_algorithms(const ContractionSpec& spec) {
    std::vector<ContractionAlgorithm> out;
    std::vector<char> all;
    for (char d : spec.free_in_a) all.push_back(d);
    for (char d : spec.free_in_b) all.push_back(d);
    for (char d : spec.contracted) all.push_back(d);

    auto sliced_except = [&](std::vector<char> kernel_dims) {
        std::vector<char> s;
        for (char d : all)
            if (!contains(kernel_dims, d)) s.push_back(d);
        return s;
    };
    auto base = [&](TensorKernel kind, std::vector<char> ka, std::vector<char> kb,
                    std::vector<char> kc) {
        ContractionAlgorithm a;
        a.kind = kind;
        a.spec = spec;
        a.opa = OperandSlice{'A', std::move(ka)};
        a.opb = OperandSlice{'B', std::move(kb)};
        a.opc = OperandSlice{'C', std::move(kc)};
        return a;
    };

    for (char c : spec.contracted)  // dot: one contracted index
        finish(out, base(TensorKernel::Dot, {c}, {c}, {}), sliced_except({c}));

    for (char f : spec.free_in_a)  // axpy: one free index in exactly one operand
        finish(out, base(TensorKernel::Axpy, {f}, {}, {f}), sliced_except({f}));
    for (char f : spec.free_in_b)
        finish(out, base(TensorKernel::Axpy, {}, {f}, {f}), sliced_except({f}));

    for (char f : spec.free_in_a)  // gemv: one free + one contracted
        for (char c : spec.contracted)
            finish(out, base(TensorKernel::Gemv, {f, c}, {c}, {f}), sliced_except({f, c}));
    for (char f : spec.free_in_b)
        for (char c : spec.contracted)
            finish(out, base(TensorKernel::Gemv, {c}, {f, c}, {f}), sliced_except({f, c}));

    for (char fa : spec.free_in_a)  // ger: one free in each operand, none contracted
        for (char fb : spec.free_in_b)
            finish(out, base(TensorKernel::Ger, {fa}, {fb}, {fa, fb}), sliced_except({fa, fb}));

    for (char fa : spec.free_in_a)  // gemm: one free in each + one contracted
        for (char fb : spec.free_in_b)
            for (char c : spec.contracted)
                finish(out, base(TensorKernel::Gemm, {fa, c}, {c, fb}, {fa, fb}),
                       sliced_except({fa, fb, c}));

    std::set<std::string> seen;
    std::vector<ContractionAlgorithm> dedup;
    for (auto& a : out)
        if (seen.insert(a.name).second) dedup.push_back(std::move(a));
    return dedup;
}

long long ContractionAlgorithm::invocations() const {
    long long n = 1;
    for (char l : loops) n *= spec.extent(l);
    return n;
}

long long ContractionAlgorithm::kernel_flops() const {
    // 2 flops per multiply-accumulate over the kernel's index space
    std::set<char> kdims(opa.kdims.begin(), opa.kdims.end());
    kdims.insert(opb.kdims.begin(), opb.kdims.end());
    kdims.insert(opc.kdims.begin(), opc.kdims.end());
    long long p = 2;
    for (char d : kdims) p *= spec.extent(d);
    return p;
}

long Tensor::stride(char d) const {
    long s = 1;
    for (size_t i = 0; i < dims.size(); ++i) {
        if (dims[i] == d) return s;
        s *= extents[i];
    }
    throw std::invalid_argument(std::string("tensor has no dimension '") + d + "'");
}

long long Tensor::size() const {
    long long s = 1;
    for (long e : extents) s *= e;
    return s;
}

Tensor make_tensor(const ContractionSpec& spec, char which) {
    Tensor t;
    t.dims = dims_of(spec, which);
    for (char d : t.dims) t.extents.push_back(spec.extent(d));
    t.data.assign((size_t)t.size(), 0.0);
    return t;
}

Tensor naive_contraction(const ContractionSpec& spec, const Tensor& a, const Tensor& b) {
    Tensor c = make_tensor(spec, 'C');
    std::vector<char> all;
    std::map<char, long> idx;
    for (char d : spec.free_in_a) all.push_back(d);
    for (char d : spec.free_in_b) all.push_back(d);
    for (char d : spec.contracted) all.push_back(d);
    for (char d : all) idx[d] = 0;
    auto offset = [&](const Tensor& t) {
        long o = 0;
        long s = 1;
        for (size_t i = 0; i < t.dims.size(); ++i) {
            o += idx.at(t.dims[i]) * s;
            s *= t.extents[i];
        }
        return o;
    };
    while (true) {
        c.data[(size_t)offset(c)] += a.data[(size_t)offset(a)] * b.data[(size_t)offset(b)];
        long d = (long)all.size() - 1;
        for (; d >= 0; --d) {
            if (++idx[all[(size_t)d]] < spec.extent(all[(size_t)d])) break;
            idx[all[(size_t)d]] = 0;
        }
        if (d < 0) break;
    }
    return c;
}

// ---- execution through the loop nest and BLAS kernels ----

namespace {

struct SliceView {
    long base = 0;                  // offset from loop indices
    std::vector<long> kstrides;     // strides of the kernel dims
    std::vector<long> kextents;
};

SliceView view_of(const Tensor& t, const OperandSlice& op, const std::map<char, long>& idx) {
    SliceView v;
    long s = 1;
    for (size_t i = 0; i < t.dims.size(); ++i) {
        char d = t.dims[i];
        if (!contains(op.kdims, d)) v.base += idx.at(d) * s;
        s *= t.extents[i];
    }
    for (char d : op.kdims) {
        v.kstrides.push_back(t.stride(d));
        long e = t.extents[(size_t)(std::find(t.dims.begin(), t.dims.end(), d) - t.dims.begin())];
        v.kextents.push_back(e);
    }
    return v;
}

}  // namespace

Tensor execute_algorithm(const ContractionAlgorithm& alg, const Tensor& a, const Tensor& b) {
    const ContractionSpec& spec = alg.spec;
    if (a.dims != spec.a_dims || b.dims != spec.b_dims)
        throw std::invalid_argument("execute_algorithm: tensor shape mismatch");
    for (size_t i = 0; i < a.dims.size(); ++i)
        if (a.extents[i] != spec.extent(a.dims[i]))
            throw std::invalid_argument("execute_algorithm: extent mismatch in A");
    for (size_t i = 0; i < b.dims.size(); ++i)
        if (b.extents[i] != spec.extent(b.dims[i]))
            throw std::invalid_argument("execute_algorithm: extent mismatch in B");
    Tensor c = make_tensor(spec, 'C');

    std::map<char, long> idx;
    for (char l : alg.loops) idx[l] = 0;

    // contiguous temporaries for copied matrix operands
    auto temp_for = [&](const OperandSlice& op) {
        std::vector<double> t;
        long long n = 1;
        for (char d : op.kdims) n *= spec.extent(d);
        t.assign((size_t)n, 0.0);
        return t;
    };
    std::vector<double> ta = alg.opa.needs_copy ? temp_for(alg.opa) : std::vector<double>{};
    std::vector<double> tb = alg.opb.needs_copy ? temp_for(alg.opb) : std::vector<double>{};
    std::vector<double> tc = alg.opc.needs_copy ? temp_for(alg.opc) : std::vector<double>{};

    auto copy_in = [&](const Tensor& t, const OperandSlice& op, std::vector<double>& tmp) {
        SliceView v = view_of(t, op, idx);
        long e0 = v.kextents[0], e1 = (long)v.kextents.size() > 1 ? v.kextents[1] : 1;
        long s0 = v.kstrides[0], s1 = (long)v.kstrides.size() > 1 ? v.kstrides[1] : 0;
        for (long j = 0; j < e1; ++j)
            for (long i = 0; i < e0; ++i) tmp[(size_t)(i + j * e0)] = t.data[(size_t)(v.base + i * s0 + j * s1)];
    };
    auto copy_out = [&](Tensor& t, const OperandSlice& op, const std::vector<double>& tmp) {
        SliceView v = view_of(t, op, idx);
        long e0 = v.kextents[0], e1 = (long)v.kextents.size() > 1 ? v.kextents[1] : 1;
        long s0 = v.kstrides[0], s1 = (long)v.kstrides.size() > 1 ? v.kstrides[1] : 0;
        for (long j = 0; j < e1; ++j)
            for (long i = 0; i < e0; ++i) t.data[(size_t)(v.base + i * s0 + j * s1)] = tmp[(size_t)(i + j * e0)];
    };

    auto elem = [&](const Tensor& t, const OperandSlice& op) -> long {
        return view_of(t, op, idx).base;
    };

    while (true) {
        SliceView va = view_of(a, alg.opa, idx);
        SliceView vb = view_of(b, alg.opb, idx);
        SliceView vc = view_of(c, alg.opc, idx);
        const double* pa = a.data.data() + va.base;
        const double* pb = b.data.data() + vb.base;
        double* pc = c.data.data() + vc.base;
        if (alg.opa.needs_copy) {
            copy_in(a, alg.opa, ta);
            pa = ta.data();
            va.kstrides = {1, va.kextents[0]};
        }
        if (alg.opb.needs_copy) {
            copy_in(b, alg.opb, tb);
            pb = tb.data();
            vb.kstrides = {1, vb.kextents[0]};
        }
        if (alg.opc.needs_copy) {
            copy_in(c, alg.opc, tc);
            pc = tc.data();
            vc.kstrides = {1, vc.kextents[0]};
        }

        switch (alg.kind) {
            case TensorKernel::Dot: {
                double acc = 0;
                for (long k = 0; k < va.kextents[0]; ++k)
                    acc += pa[k * va.kstrides[0]] * pb[k * vb.kstrides[0]];
                *pc += acc;
                break;
            }
            case TensorKernel::Axpy: {
                bool free_a = !alg.opa.kdims.empty();
                double alpha = free_a ? b.data[(size_t)elem(b, alg.opb)] : a.data[(size_t)elem(a, alg.opa)];
                const double* x = free_a ? pa : pb;
                long sx = free_a ? va.kstrides[0] : vb.kstrides[0];
                long n = vc.kextents[0];
                for (long i = 0; i < n; ++i) pc[i * vc.kstrides[0]] += alpha * x[i * sx];
                break;
            }
            case TensorKernel::Gemv: {
                bool mat_a = alg.opa.kdims.size() == 2;
                const double* M = mat_a ? pa : pb;
                const SliceView& vm = mat_a ? va : vb;
                const double* x = mat_a ? pb : pa;
                long sx = mat_a ? vb.kstrides[0] : va.kstrides[0];
                long nf = vm.kextents[0], nc = vm.kextents[1];
                for (long f = 0; f < nf; ++f) {
                    double acc = 0;
                    for (long k = 0; k < nc; ++k)
                        acc += M[f * vm.kstrides[0] + k * vm.kstrides[1]] * x[k * sx];
                    pc[f * vc.kstrides[0]] += acc;
                }
                break;
            }
            case TensorKernel::Ger: {
                long m = va.kextents[0], n = vb.kextents[0];
                for (long j = 0; j < n; ++j)
                    for (long i = 0; i < m; ++i)
                        pc[i * vc.kstrides[0] + j * vc.kstrides[1]] +=
                            pa[i * va.kstrides[0]] * pb[j * vb.kstrides[0]];
                break;
            }
            case TensorKernel::Gemm: {
                long m = va.kextents[0], kk = va.kextents[1], n = vb.kextents[1];
                for (long j = 0; j < n; ++j)
                    for (long i = 0; i < m; ++i) {
                        double acc = 0;
                        for (long k = 0; k < kk; ++k)
                            acc += pa[i * va.kstrides[0] + k * va.kstrides[1]] *
                                   pb[k * vb.kstrides[0] + j * vb.kstrides[1]];
                        pc[i * vc.kstrides[0] + j * vc.kstrides[1]] += acc;
                    }
                break;
            }
        }
        if (alg.opc.needs_copy) copy_out(c, alg.opc, tc);

        long d = (long)alg.loops.size() - 1;
        for (; d >= 0; --d) {
            char l = alg.loops[(size_t)d];
            if (++idx[l] < spec.extent(l)) break;
            idx[l] = 0;
        }
        if (d < 0) break;
    }
    return c;
}

// ---- access-distance back-traversal over the loop nest ----

namespace {

long long slice_elems(const ContractionSpec& spec, const OperandSlice& op,
                      const std::set<char>& joined) {
    long long n = 1;
    for (char d : dims_of(spec, op.tensor))
        if (contains(op.kdims, d) || joined.count(d)) n *= spec.extent(d);
    return n;
}

}  // namespace

long long access_distance_ast(const ContractionAlgorithm& alg, char tensor, int start_depth) {
    const ContractionSpec& spec = alg.spec;
    std::map<char, std::set<char>> joined;  // per tensor letter
    bool m_active = false;

    int scan_from = (int)alg.loops.size() - 1;
    if (start_depth >= 0 && start_depth < (int)alg.loops.size()) {
        // first-iteration analysis: M pre-seeded with the kernel's regions
        // joined across the starting loop and everything inside it
        for (char t : {'A', 'B', 'C'})
            for (size_t d = (size_t)start_depth; d < alg.loops.size(); ++d)
                if (contains(dims_of(spec, t), alg.loops[d])) joined[t].insert(alg.loops[d]);
        m_active = true;
        scan_from = start_depth - 1;
    }

    auto total = [&]() {
        if (!m_active) return 0LL;
        long long s = 0;
        for (char t : {'A', 'B', 'C'}) s += slice_elems(spec, op_of(alg, t), joined[t]);
        return s;
    };

    for (int d = scan_from; d >= 0; --d) {
        char l = alg.loops[(size_t)d];
        bool varies = contains(dims_of(spec, tensor), l);
        if (!varies) return total();  // case 1: previous iteration used the same operand
        for (char t : {'A', 'B', 'C'})  // case 2: join everything across this loop
            if (contains(dims_of(spec, t), l)) joined[t].insert(l);
        m_active = true;
    }
    return total();  // case 3: root reached, assume repeated contraction executions
}

PrefetchInfo detect_prefetch(const ContractionAlgorithm& alg, char tensor) {
    PrefetchInfo info;
    if (alg.loops.empty()) return info;
    const ContractionSpec& spec = alg.spec;
    const OperandSlice& op = op_of(alg, tensor);
    const auto& dims = dims_of(spec, tensor);
    char inner = alg.loops.back();
    if (!contains(dims, inner)) return info;  // does not vary across the inner loop
    if (contains(op.kdims, inner)) return info;

    long long slice = slice_elems(spec, op, {});
    if (dims[0] == inner) {
        // the loop indexes the first dimension: consecutive iterations share
        // cache-lines; the slice's first-dim extent is 1, so the prefetch
        // access loads it entirely
        info.prefetched = true;
        info.line_sharing = true;
        info.elems = slice;
        return info;
    }
    if (dims.size() >= 2 && dims[1] == inner) {
        bool first_entire = contains(op.kdims, dims[0]);
        bool first_one_line = spec.extent(dims[0]) <= 8;
        if (first_entire || first_one_line) {
            info.prefetched = true;
            info.elems = std::min<long long>(slice, 8);
            return info;
        }
    }
    return info;
}

std::vector<SetupItem> build_setup(const std::vector<std::pair<char, long long>>& operand_sizes,
                                   const std::map<char, long long>& distances,
                                   long long cache_elems) {
    struct Item {
        char op;
        long long size, dist;
    };
    std::vector<Item> ops;
    for (const auto& [t, s] : operand_sizes) ops.push_back({t, s, distances.at(t)});
    std::stable_sort(ops.begin(), ops.end(),
                     [](const Item& a, const Item& b) { return a.dist > b.dist; });

    // remote fillers so the cumulative size right of each operand matches its
    // distance; ties clamp to the closest realizable distance
    std::vector<SetupItem> list;
    long long cum = 0;
    std::vector<SetupItem> rev;
    for (size_t i = ops.size(); i-- > 0;) {
        long long fill = std::max(0LL, ops[i].dist - cum);
        if (fill > 0) {
            rev.push_back(SetupItem{true, 0, fill});
            cum += fill;
        }
        rev.push_back(SetupItem{false, ops[i].op, ops[i].size});
        cum += ops[i].size;
    }
    list.assign(rev.rbegin(), rev.rend());

    // truncate the list at the front to 5/4 of the cache
    long long budget = cache_elems * 5 / 4;
    long long acc = 0;
    std::vector<SetupItem> kept;
    for (size_t i = list.size(); i-- > 0;) {
        const SetupItem& it = list[i];
        if (acc + it.elems <= budget) {
            kept.push_back(it);
            acc += it.elems;
            continue;
        }
        if (it.remote && budget - acc > 0) kept.push_back(SetupItem{true, 0, budget - acc});
        break;
    }
    std::vector<SetupItem> out(kept.rbegin(), kept.rend());
    bool any_remote = std::any_of(out.begin(), out.end(), [](const SetupItem& s) { return s.remote; });
    if (!any_remote) return {};  // operands-only setups are redundant
    return out;
}

// ---- micro-benchmarks ----

namespace {

// a representative kernel invocation bound to the "A"/"B"/"C" tensor buffers
Call representative_call(const ContractionAlgorithm& alg) {
    const ContractionSpec& spec = alg.spec;
    std::map<char, long> idx;
    for (char l : alg.loops) idx[l] = spec.extent(l) / 2;  // mid-stream iteration

    Tensor a = make_tensor(spec, 'A'), b = make_tensor(spec, 'B'), c = make_tensor(spec, 'C');
    SliceView va = view_of(a, alg.opa, idx), vb = view_of(b, alg.opb, idx),
              vc = view_of(c, alg.opc, idx);
    auto ext = [&](char d) { return spec.extent(d); };

    switch (alg.kind) {
        case TensorKernel::Dot:
            return make_call("ddot", {}, {ext(alg.opa.kdims[0])}, {},
                             {Operand{"A", va.base}, Operand{"B", vb.base}}, {},
                             {va.kstrides[0], vb.kstrides[0]});
        case TensorKernel::Axpy: {
            bool free_a = !alg.opa.kdims.empty();
            long n = ext(alg.opc.kdims[0]);
            Operand x = free_a ? Operand{"A", va.base} : Operand{"B", vb.base};
            long sx = free_a ? va.kstrides[0] : vb.kstrides[0];
            return make_call("daxpy", {}, {n}, {1.5}, {x, Operand{"C", vc.base}}, {},
                             {sx, vc.kstrides[0]});
        }
        case TensorKernel::Gemv: {
            bool mat_a = alg.opa.kdims.size() == 2;
            const OperandSlice& mop = mat_a ? alg.opa : alg.opb;
            SliceView vm = mat_a ? va : vb;
            Operand mo = mat_a ? Operand{"A", vm.base} : Operand{"B", vm.base};
            if (mop.needs_copy) {
                mo = Operand{"T" + std::string(1, mop.tensor), 0};
                vm.kstrides = {1, vm.kextents[0]};
            }
            Operand xo = mat_a ? Operand{"B", vb.base} : Operand{"A", va.base};
            long sx = mat_a ? vb.kstrides[0] : va.kstrides[0];
            long nf = vm.kextents[0], nc = vm.kextents[1];
            if (vm.kstrides[0] == 1)  // (free x con) stored with unit stride on free
                return make_call("dgemv", {'N'}, {nf, nc}, {1.0, 1.0},
                                 {mo, xo, Operand{"C", vc.base}}, {vm.kstrides[1]},
                                 {sx, vc.kstrides[0]});
            return make_call("dgemv", {'T'}, {nc, nf}, {1.0, 1.0},
                             {mo, xo, Operand{"C", vc.base}}, {vm.kstrides[0]},
                             {sx, vc.kstrides[0]});
        }
        case TensorKernel::Ger: {
            long m = va.kextents[0], n = vb.kextents[0];
            SliceView vcc = vc;
            Operand co{"C", vc.base};
            if (alg.opc.needs_copy) {
                co = Operand{"TC", 0};
                vcc.kstrides = {1, m};
            }
            if (vcc.kstrides[0] == 1)
                return make_call("dger", {}, {m, n}, {1.0},
                                 {Operand{"A", va.base}, Operand{"B", vb.base}, co},
                                 {std::max(vcc.kstrides[1], 1L)},
                                 {va.kstrides[0], vb.kstrides[0]});
            // write the transposed view: rows on the unit-stride second dim
            return make_call("dger", {}, {n, m}, {1.0},
                             {Operand{"B", vb.base}, Operand{"A", va.base}, co},
                             {std::max(vcc.kstrides[0], 1L)},
                             {vb.kstrides[0], va.kstrides[0]});
        }
        case TensorKernel::Gemm: {
            long m = va.kextents[0], kk = va.kextents[1], n = vb.kextents[1];
            SliceView vaa = va, vbb = vb, vcc = vc;
            Operand ao{"A", va.base}, bo{"B", vb.base}, co{"C", vc.base};
            if (alg.opa.needs_copy) {
                ao = Operand{"TA", 0};
                vaa.kstrides = {1, m};
            }
            if (alg.opb.needs_copy) {
                bo = Operand{"TB", 0};
                vbb.kstrides = {1, kk};
            }
            if (alg.opc.needs_copy) {
                co = Operand{"TC", 0};
                vcc.kstrides = {1, m};
            }
            bool swap = vcc.kstrides[0] != 1;  // write C transposed: C' = B' A'
            if (!swap) {
                char ta = vaa.kstrides[0] == 1 ? 'N' : 'T';
                char tb = vbb.kstrides[0] == 1 ? 'N' : 'T';
                long lda = ta == 'N' ? vaa.kstrides[1] : vaa.kstrides[0];
                long ldb = tb == 'N' ? vbb.kstrides[1] : vbb.kstrides[0];
                return make_call("dgemm", {ta, tb}, {m, n, kk}, {1.0, 1.0}, {ao, bo, co},
                                 {std::max(lda, 1L), std::max(ldb, 1L),
                                  std::max(vcc.kstrides[1], 1L)});
            }
            char ta = vbb.kstrides[1] == 1 ? 'N' : 'T';  // op(B') is n x k
            char tb = vaa.kstrides[1] == 1 ? 'N' : 'T';
            long lda = ta == 'N' ? vbb.kstrides[0] : vbb.kstrides[1];
            long ldb = tb == 'N' ? vaa.kstrides[0] : vaa.kstrides[1];
            return make_call("dgemm", {ta, tb}, {n, m, kk}, {1.0, 1.0}, {bo, ao, co},
                             {std::max(lda, 1L), std::max(ldb, 1L), std::max(vcc.kstrides[0], 1L)});
        }
    }
    throw std::logic_error("unreachable");
}

std::vector<Call> copy_calls_for(const ContractionAlgorithm& alg) {
    std::vector<Call> out;
    const ContractionSpec& spec = alg.spec;
    std::map<char, long> idx;
    for (char l : alg.loops) idx[l] = spec.extent(l) / 2;
    for (char t : {'A', 'B', 'C'}) {
        const OperandSlice& op = op_of(alg, t);
        if (!op.needs_copy) continue;
        Tensor tt = make_tensor(spec, t);
        SliceView v = view_of(tt, op, idx);
        long e0 = v.kextents[0], e1 = v.kextents.size() > 1 ? v.kextents[1] : 1;
        for (long j = 0; j < e1; ++j) {
            out.push_back(make_call("dcopy", {}, {e0}, {},
                                    {Operand{std::string(1, t), v.base + j * v.kstrides[1]},
                                     Operand{std::string("T") + t, j * e0}},
                                    {}, {v.kstrides[0], 1}));
        }
    }
    return out;
}

}  // namespace

namespace {

struct FirstIter {
    int depth;
    double fraction;
};

// loops whose first iterations account for more than 1% of the kernel
// invocations (innermost first); loops of extent 1 are skipped
std::vector<FirstIter> qualifying_first_iters(const ContractionAlgorithm& alg) {
    std::vector<FirstIter> firsts;
    double g = 1.0;
    for (int d = (int)alg.loops.size() - 1; d >= 0; --d) {
        long e = alg.spec.extent(alg.loops[(size_t)d]);
        g /= (double)e;
        if (e > 1 && g > 0.01) firsts.push_back({d, g});
    }
    return firsts;
}

bool has_line_sharing(const ContractionAlgorithm& alg) {
    for (char t : {'A', 'B', 'C'})
        if (detect_prefetch(alg, t).line_sharing) return true;
    return false;
}

}  // namespace

std::vector<std::pair<std::string, double>> benchmark_weights(const ContractionAlgorithm& alg,
                                                              long cache_line_bytes) {
    // the class of an invocation is the outermost loop whose entire inner
    // chain sits at its first iteration; deeper classes subtract the ones
    // further out so the fractions partition the invocations
    std::vector<std::pair<std::string, double>> out;
    auto firsts = qualifying_first_iters(alg);
    double first_total = firsts.empty() ? 0.0 : firsts.front().fraction;
    double base_pop = 1.0 - first_total;
    double line_elems = (double)(cache_line_bytes / 8);
    if (has_line_sharing(alg)) {
        out.push_back({"base", base_pop * (line_elems - 1.0) / line_elems});
        out.push_back({"prefetch-failure", base_pop / line_elems});
    } else {
        out.push_back({"base", base_pop});
    }
    for (size_t i = 0; i < firsts.size(); ++i) {
        double w = firsts[i].fraction - (i + 1 < firsts.size() ? firsts[i + 1].fraction : 0.0);
        if (w <= 0) continue;
        out.push_back({std::string("first-iteration(") + alg.loops[(size_t)firsts[i].depth] + ")", w});
    }
    return out;
}

std::vector<MicroBenchmark> build_benchmarks(const ContractionAlgorithm& alg, long long cache_bytes,
                                             long cache_line_bytes) {
    const ContractionSpec& spec = alg.spec;
    long long cache_elems = cache_bytes / 8;

    std::vector<std::pair<char, long long>> sizes;
    std::map<char, long long> dist;
    std::map<char, PrefetchInfo> pf;
    for (char t : {'A', 'B', 'C'}) {
        sizes.push_back({t, slice_elems(spec, op_of(alg, t), {})});
        dist[t] = access_distance_ast(alg, t);
        pf[t] = detect_prefetch(alg, t);
    }

    Call kc = representative_call(alg);
    auto copies = copy_calls_for(alg);

    // base setup: prefetched operands appear at their prefetch distance (0)
    // with the prefetched extent
    auto setup_with = [&](bool emulate_prefetch) {
        std::vector<std::pair<char, long long>> s = sizes;
        std::map<char, long long> d = dist;
        if (emulate_prefetch) {
            for (char t : {'A', 'B', 'C'}) {
                if (!pf[t].prefetched) continue;
                d[t] = 0;
                for (auto& e : s)
                    if (e.first == t) e.second = pf[t].elems;
            }
        }
        return build_setup(s, d, cache_elems);
    };

    auto firsts = qualifying_first_iters(alg);
    std::vector<MicroBenchmark> out;
    for (const auto& [label, weight] : benchmark_weights(alg, cache_line_bytes)) {
        MicroBenchmark mb;
        mb.label = label;
        mb.weight = weight;
        mb.kernel_call = kc;
        mb.copy_calls = copies;
        if (label == "base") {
            mb.setup = setup_with(true);
        } else if (label == "prefetch-failure") {
            mb.setup = setup_with(false);
        } else {
            char loop = label[label.size() - 2];
            int depth = -1;
            for (const auto& f : firsts)
                if (alg.loops[(size_t)f.depth] == loop) depth = f.depth;
            std::map<char, long long> d;
            for (char t : {'A', 'B', 'C'}) d[t] = access_distance_ast(alg, t, depth);
            mb.setup = build_setup(sizes, d, cache_elems);
        }
        out.push_back(std::move(mb));
    }
    return out;
}

double predict_contraction(const ContractionAlgorithm& alg,
                           const std::map<std::string, double>& timings,
                           double copy_time_per_invocation) {
    double n = (double)alg.invocations();
    double total = 0;
    for (const auto& [label, weight] : benchmark_weights(alg)) {
        auto it = timings.find(label);
        if (it == timings.end()) throw std::out_of_range("missing benchmark timing: " + label);
        total += weight * n * it->second;
    }
    if (copy_time_per_invocation > 0) {
        long long copy_invocations = 0;
        for (char t : {'A', 'B', 'C'}) {
            const OperandSlice& op = op_of(alg, t);
            if (!op.needs_copy) continue;
            long long ci = 1;
            for (int d = 0; d < op.copy_depth; ++d) ci *= alg.spec.extent(alg.loops[(size_t)d]);
            copy_invocations += ci;
        }
        total += copy_time_per_invocation * (double)copy_invocations;
    }
    return total;
}

std::vector<RankedContraction> rank_contractions(const ContractionSpec& spec, Sampler& sampler,
                                                 long long cache_bytes, int repetitions) {
    auto algs = generate_algorithms(spec);
    std::vector<RankedContraction> out;
    for (const auto& alg : algs) {
        auto benchmarks = build_benchmarks(alg, cache_bytes);
        BufferStore store;
        for (char t : {'A', 'B', 'C'}) {
            Tensor tt = make_tensor(spec, t);
            double* p = store.alloc(std::string(1, t), (size_t)tt.size());
            for (long long i = 0; i < tt.size(); ++i) p[i] = 1.0 + 1e-3 * (double)(i % 17);
        }
        for (char t : {'A', 'B', 'C'}) {
            const OperandSlice& op = op_of(alg, t);
            if (op.needs_copy) {
                long long n = 1;
                for (char d : op.kdims) n *= spec.extent(d);
                store.alloc(std::string("T") + t, (size_t)n);
            }
        }
        double total = 0;
        double copy_time = 0;
        for (const auto& mb : benchmarks) {
            CachePrecondition pre;
            for (const auto& item : mb.setup) {
                CachePrecondition::Access a;
                a.remote = item.remote;
                a.bytes = item.elems * 8;
                if (!item.remote) a.operand = Operand{std::string(1, item.operand), 0};
                pre.accesses.push_back(a);
            }
            auto times = sampler.run_with_precondition(mb.kernel_call, pre, repetitions, store);
            total += mb.weight * (double)alg.invocations() * summarize(times).median;
        }
        if (!benchmarks.empty() && !benchmarks.front().copy_calls.empty()) {
            // time the copies once; they run with every kernel invocation of
            // their loop level
            Clock* synth = sampler.backend().clock();
            SteadyClock steady;
            Clock& clock = synth ? *synth : static_cast<Clock&>(steady);
            std::vector<double> ct;
            for (int r = 0; r < repetitions; ++r) {
                std::uint64_t t0 = clock.now_ticks();
                for (const auto& cc : benchmarks.front().copy_calls) sampler.backend().execute(cc, store);
                std::uint64_t t1 = clock.now_ticks();
                ct.push_back((double)(t1 - t0) * clock.tick_seconds());
            }
            copy_time = summarize(ct).median;
            // copies execute once per iteration of their loop level
            long long copy_invocations = 1;
            for (char t2 : {'A', 'B', 'C'}) {
                const OperandSlice& op = op_of(alg, t2);
                if (!op.needs_copy) continue;
                long long ci = 1;
                for (int d = 0; d < op.copy_depth; ++d) ci *= spec.extent(alg.loops[(size_t)d]);
                copy_invocations = std::max(copy_invocations, ci);
            }
            total += copy_time * (double)copy_invocations;
        }
        long long flops = alg.invocations() * alg.kernel_flops();
        out.push_back({alg.name, total, total > 0 ? (double)flops / total : 0.0});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const RankedContraction& a, const RankedContraction& b) {
                         return a.runtime < b.runtime;
                     });
    return out;
}

namespace {

std::string slice_text(const ContractionAlgorithm& alg, char tensor) {
    const OperandSlice& op = op_of(alg, tensor);
    std::string s = "[";
    bool first = true;
    for (char d : dims_of(alg.spec, tensor)) {
        if (!first) s += ",";
        first = false;
        s += contains(op.kdims, d) ? ":" : std::string(1, d);
    }
    return s + "]";
}

}  // namespace

std::string render_algorithm(const ContractionAlgorithm& alg) {
    std::ostringstream os;
    os << "// " << alg.name << "\n";
    std::string ind;
    for (size_t d = 0; d < alg.loops.size(); ++d) {
        char l = alg.loops[d];
        os << ind << "for (" << l << " = 0; " << l << " < " << alg.spec.extent(l) << "; ++" << l
           << ") {\n";
        ind += "  ";
        for (char t : {'A', 'B', 'C'}) {
            const OperandSlice& op = op_of(alg, t);
            if (op.needs_copy && op.copy_depth == (int)d + 1)
                os << ind << "T" << t << " = copy(" << t << slice_text(alg, t) << ");\n";
        }
    }
    os << ind << tensor_kernel_name(alg.kind) << "(";
    bool first = true;
    for (char t : {'A', 'B', 'C'}) {
        if (!first) os << ", ";
        first = false;
        const OperandSlice& op = op_of(alg, t);
        if (op.needs_copy)
            os << "T" << t;
        else
            os << t << slice_text(alg, t);
    }
    os << ")\n";
    for (size_t d = alg.loops.size(); d-- > 0;) {
        ind = std::string(2 * d, ' ');
        os << ind << "}\n";
    }
    return os.str();
}

}  // namespace dlap
