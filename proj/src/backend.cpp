#include "dlap/backend.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>

#if defined(__unix__) || defined(__APPLE__)
#include <dlfcn.h>
#define DLAP_HAVE_DLOPEN 1
#endif

#if defined(__x86_64__) || defined(__i386__)
#include <x86intrin.h>
#define DLAP_HAVE_RDTSC 1
#endif

namespace dlap {

std::uint64_t SteadyClock::now_ticks() {
    return (std::uint64_t)std::chrono::duration_cast<std::chrono::nanoseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::uint64_t CycleClock::now_ticks() {
#ifdef DLAP_HAVE_RDTSC
    return __rdtsc();
#else
    throw std::runtime_error("cycle counter not available on this platform");
#endif
}

bool CycleClock::available() {
#ifdef DLAP_HAVE_RDTSC
    return true;
#else
    return false;
#endif
}

SharedLibBackend::SharedLibBackend(const std::string& path, int threads,
                                   const std::string& env_template) : path_(path) {
#ifdef DLAP_HAVE_DLOPEN
    if (!env_template.empty()) {
        std::string e = env_template;
        auto pos = e.find("{nt}");
        if (pos != std::string::npos) e.replace(pos, 4, std::to_string(threads));
        auto eq = e.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("backend env template must look like VAR={nt}");
        setenv(e.substr(0, eq).c_str(), e.substr(eq + 1).c_str(), 1);
    }
    handle_ = dlopen(path.c_str(), RTLD_NOW | RTLD_LOCAL);
    if (!handle_) throw std::runtime_error(std::string("cannot load backend: ") + dlerror());
#else
    (void)threads;
    (void)env_template;
    throw std::runtime_error("shared library backends are not supported on this platform");
#endif
}

SharedLibBackend::~SharedLibBackend() {
#ifdef DLAP_HAVE_DLOPEN
    if (handle_) dlclose(handle_);
#endif
}

void SharedLibBackend::execute(const Call& call, BufferStore& store) {
#ifndef DLAP_HAVE_DLOPEN
    (void)call;
    (void)store;
    throw std::runtime_error("shared library backends are not supported on this platform");
#else
    const auto& k = kernel(call.kernel);
    k.validate(call);
    void* sym = dlsym(handle_, (call.kernel + "_").c_str());
    if (!sym) throw std::runtime_error("backend does not provide " + call.kernel);

    // marshal all arguments by reference in positional order
    std::vector<void*> argv;
    std::vector<char> flagv(call.flags);
    std::vector<int> intv;
    intv.reserve(call.sizes.size() + call.lds.size() + call.incs.size() + 4);
    auto push_int = [&](long v) {
        intv.push_back((int)v);
        return (void*)nullptr;  // pointer taken after all pushes
    };
    std::vector<double> scal(call.scalars);
    std::vector<size_t> int_slots;

    size_t fi = 0, si = 0, ci = 0, di = 0, li = 0, ii = 0;
    struct Slot { enum Kind { Flag, Int, Scalar, Data, IData } kind; size_t idx; };
    std::vector<Slot> slots;
    int n_info = 0;
    for (const auto& a : k.args) {
        switch (a.role) {
            case ArgRole::Flag: slots.push_back({Slot::Flag, fi++}); break;
            case ArgRole::Size:
                push_int(call.sizes.at(si));
                slots.push_back({Slot::Int, intv.size() - 1});
                ++si;
                break;
            case ArgRole::Scalar: slots.push_back({Slot::Scalar, ci++}); break;
            case ArgRole::Data: slots.push_back({Slot::Data, di++}); break;
            case ArgRole::LeadingDim:
                push_int(call.lds.at(li));
                slots.push_back({Slot::Int, intv.size() - 1});
                ++li;
                break;
            case ArgRole::Increment:
                push_int(call.incs.at(ii));
                slots.push_back({Slot::Int, intv.size() - 1});
                ++ii;
                break;
            case ArgRole::Info:
                push_int(0);
                slots.push_back({Slot::Int, intv.size() - 1});
                ++n_info;
                break;
        }
    }
    (void)int_slots;
    (void)n_info;
    size_t data_i = 0;
    std::vector<void*> data_ptrs;
    for (int da : k.data_args) {
        const Operand& o = call.operands.at(data_i++);
        // pivot vectors live in the integer store
        if (k.args[da].name == "ipiv")
            data_ptrs.push_back((void*)(store.get_int(o.buffer) + o.offset));
        else
            data_ptrs.push_back((void*)(store.get(o.buffer) + o.offset));
    }
    for (const auto& sl : slots) {
        switch (sl.kind) {
            case Slot::Flag: argv.push_back(&flagv[sl.idx]); break;
            case Slot::Int: argv.push_back(&intv[sl.idx]); break;
            case Slot::Scalar: argv.push_back(&scal[sl.idx]); break;
            case Slot::Data:
            case Slot::IData: argv.push_back(data_ptrs[sl.idx]); break;
        }
    }

    using P = void*;
    switch (argv.size()) {
#define A(i) argv[i]
        case 4: ((void (*)(P, P, P, P))sym)(A(0), A(1), A(2), A(3)); break;
        case 5: ((void (*)(P, P, P, P, P))sym)(A(0), A(1), A(2), A(3), A(4)); break;
        case 6: ((void (*)(P, P, P, P, P, P))sym)(A(0), A(1), A(2), A(3), A(4), A(5)); break;
        case 7: ((void (*)(P, P, P, P, P, P, P))sym)(A(0), A(1), A(2), A(3), A(4), A(5), A(6)); break;
        case 8: ((void (*)(P, P, P, P, P, P, P, P))sym)(A(0), A(1), A(2), A(3), A(4), A(5), A(6), A(7)); break;
        case 9: ((void (*)(P, P, P, P, P, P, P, P, P))sym)(A(0), A(1), A(2), A(3), A(4), A(5), A(6), A(7), A(8)); break;
        case 10: ((void (*)(P, P, P, P, P, P, P, P, P, P))sym)(A(0), A(1), A(2), A(3), A(4), A(5), A(6), A(7), A(8), A(9)); break;
        case 11: ((void (*)(P, P, P, P, P, P, P, P, P, P, P))sym)(A(0), A(1), A(2), A(3), A(4), A(5), A(6), A(7), A(8), A(9), A(10)); break;
        case 12: ((void (*)(P, P, P, P, P, P, P, P, P, P, P, P))sym)(A(0), A(1), A(2), A(3), A(4), A(5), A(6), A(7), A(8), A(9), A(10), A(11)); break;
        case 13: ((void (*)(P, P, P, P, P, P, P, P, P, P, P, P, P))sym)(A(0), A(1), A(2), A(3), A(4), A(5), A(6), A(7), A(8), A(9), A(10), A(11), A(12)); break;
        case 14: ((void (*)(P, P, P, P, P, P, P, P, P, P, P, P, P, P))sym)(A(0), A(1), A(2), A(3), A(4), A(5), A(6), A(7), A(8), A(9), A(10), A(11), A(12), A(13)); break;
        case 15: ((void (*)(P, P, P, P, P, P, P, P, P, P, P, P, P, P, P))sym)(A(0), A(1), A(2), A(3), A(4), A(5), A(6), A(7), A(8), A(9), A(10), A(11), A(12), A(13), A(14)); break;
#undef A
        default: throw std::runtime_error("unsupported argument count for " + call.kernel);
    }
#endif
}

SyntheticBackend::TimeModel synthetic_flops_model(double flops_per_second) {
    return [flops_per_second](const Call& c) {
        long long f = kernel(c.kernel).flops(c);
        // zero-flop kernels move data; charge their movement at the same rate
        if (f == 0) f = kernel(c.kernel).data_movement(c);
        return (double)f / flops_per_second + 1e-7;
    };
}

SyntheticBackend::TimeModel synthetic_poly_model() {
    // exact cubic polynomial of the size arguments, distinct per kernel
    return [](const Call& c) {
        double t = 2e-6;
        double h = 1.0;
        for (char ch : c.kernel) h += (double)(ch % 7);
        const auto degs = kernel(c.kernel).size_degrees(c.flags);
        for (size_t i = 0; i < c.sizes.size(); ++i) {
            double x = (double)c.sizes[i];
            t += 1e-9 * h * x + 2e-10 * x * x;
        }
        // leading term follows the kernel's own complexity
        double lead = 1e-10 * h;
        double prod = 1.0;
        for (size_t i = 0; i < c.sizes.size(); ++i)
            for (int d = 0; d < (i < degs.size() ? degs[i] : 1); ++d) prod *= (double)c.sizes[i];
        t += lead * prod;
        return t;
    };
}

std::unique_ptr<Backend> open_backend(const std::string& spec, int threads,
                                      const std::string& env_template) {
    if (spec.empty() || spec == "reference") return std::make_unique<ReferenceBackend>();
    if (spec.rfind("synthetic", 0) == 0) {
        std::string rest = spec.size() > 9 && spec[9] == ':' ? spec.substr(10) : "";
        if (rest.rfind("flops@", 0) == 0)
            return std::make_unique<SyntheticBackend>(synthetic_flops_model(std::stod(rest.substr(6))),
                                                      false, spec);
        if (rest.empty() || rest == "poly")
            return std::make_unique<SyntheticBackend>(synthetic_poly_model(), false, spec);
        throw std::invalid_argument("unknown synthetic backend spec: " + spec);
    }
    return std::make_unique<SharedLibBackend>(spec, threads, env_template);
}

}  // namespace dlap
