#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

// Kernel descriptors, argument taxonomy, and cost accounting for the
// double-precision BLAS/LAPACK subset used by the blocked-algorithm and
// tensor-contraction predictors.  All matrices are column-major with
// explicit leading dimensions; vectors carry increments.

namespace dlap {

enum class ArgRole { Flag, Size, Scalar, Data, LeadingDim, Increment, Info };

enum class DataDir { In, Out, InOut };

struct ArgSpec {
    std::string name;
    ArgRole role = ArgRole::Size;
    std::vector<char> allowed;  // flag values
    DataDir dir = DataDir::In;  // data args
    int ref = -1;               // ld/inc args: index into data args
};

// A data-argument binding: named buffer plus element offset.
struct Operand {
    std::string buffer;
    long offset = 0;
    std::string block;  // optional annotation, e.g. "A21"
};

struct Call {
    std::string kernel;
    std::vector<char> flags;
    std::vector<long> sizes;
    std::vector<double> scalars;
    std::vector<Operand> operands;
    std::vector<long> lds;
    std::vector<long> incs;
    bool pseudo = false;   // inline update without a kernel behind it
    std::string note;      // human-readable tag for pseudo calls / reports

    bool zero_extent() const {
        for (long s : sizes)
            if (s == 0) return true;
        return false;
    }
};

struct MachineSpec {
    std::string name;
    double base_frequency = 0;     // Hz
    double flops_per_cycle = 0;    // per core
    int cores = 0;
    double peak_bandwidth = 0;     // bytes/s
    struct CacheLevel {
        long capacity = 0;     // bytes
        long line_size = 64;   // bytes
        int associativity = 0; // 0 = fully associative
    };
    std::vector<CacheLevel> caches;

    double peak_performance(int threads) const {
        return flops_per_cycle * base_frequency * threads;
    }
    // last (shared) cache level
    long last_level_cache() const {
        return caches.empty() ? 0 : caches.back().capacity;
    }
    void validate() const;
};

// Memory region touched by one operand of a call; the unit of the cache
// model's access history.
struct OperandRegion {
    int data_arg = 0;       // index among the call's data args
    DataDir dir = DataDir::In;
    std::string buffer;
    long offset = 0;
    long long elems = 0;    // elements actually accessed
    std::string block;
};

class BufferStore;

struct KernelDescriptor {
    std::string name;
    std::vector<ArgSpec> args;

    std::function<long long(const Call&)> flops;
    std::function<long long(const Call&)> data_volume;
    std::function<long long(const Call&)> data_movement;
    // polynomial degree of the minimal flop count in each size argument
    std::function<std::vector<int>(const std::vector<char>&)> size_degrees;
    std::function<std::vector<OperandRegion>(const Call&)> operands;

    std::vector<int> flag_args, size_args, scalar_args, data_args, ld_args, inc_args;

    void validate(const Call& c) const;
};

const std::map<std::string, KernelDescriptor>& kernel_registry();
const KernelDescriptor& kernel(const std::string& name);
bool has_kernel(const std::string& name);

// Cost accounting entry points (validate flags/sizes, then evaluate the
// closed forms).
long long flop_count(const std::string& kernel, const std::vector<long>& sizes,
                     const std::vector<char>& flags = {});
long long min_data_volume(const std::string& kernel, const std::vector<long>& sizes,
                          const std::vector<char>& flags = {});
long long min_data_movement(const std::string& kernel, const std::vector<long>& sizes,
                            const std::vector<char>& flags = {});

// flops per byte; doubles are 8 bytes
double arithmetic_intensity(const std::string& kernel, const std::vector<long>& sizes,
                            const std::vector<char>& flags = {});

// min(peak bandwidth x intensity, peak performance), single socket
double roofline_limit(const MachineSpec& machine, double intensity, int threads = 1);

Call make_call(const std::string& kernel, const std::vector<char>& flags,
               const std::vector<long>& sizes, const std::vector<double>& scalars,
               const std::vector<Operand>& operands, const std::vector<long>& lds,
               const std::vector<long>& incs = {});

class BufferStore {
  public:
    double* alloc(const std::string& name, size_t elems);
    double* get(const std::string& name);
    const double* get(const std::string& name) const;
    size_t size(const std::string& name) const;
    bool has(const std::string& name) const;
    std::vector<std::string> names() const;
    // int buffers (pivot vectors)
    int* alloc_int(const std::string& name, size_t n);
    int* get_int(const std::string& name);

  private:
    std::map<std::string, std::vector<double>> bufs_;
    std::map<std::string, std::vector<int>> ibufs_;
};

// Reference execution of a call on caller-owned buffers.
void execute(const Call& call, BufferStore& store);

}  // namespace dlap
