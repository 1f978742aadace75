#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dlap/kernels.hpp"
#include "dlap/sampler.hpp"

// Einstein-notation tensor contractions: BLAS-based algorithm generation,
// AST-based cache analysis, micro-benchmark construction, and prediction.

namespace dlap {

struct ContractionSpec {
    std::vector<char> c_dims, a_dims, b_dims;  // storage order (first dim contiguous)
    std::map<char, long> extents;

    std::vector<char> free_in_a, free_in_b, contracted;  // classification

    long extent(char d) const { return extents.at(d); }
    void classify();  // validates the index structure
};

// "C[a,b,c] = A[a,i] * B[i,b,c]" with optional "a=400 b=400 c=400 i=8"
ContractionSpec parse_spec(const std::string& text);

enum class TensorKernel { Dot, Axpy, Gemv, Ger, Gemm };
std::string tensor_kernel_name(TensorKernel k);

// one kernel operand: a tensor sliced along all dims but `kdims`
struct OperandSlice {
    char tensor = 0;             // 'A', 'B', 'C'
    std::vector<char> kdims;     // kernel dims in role order (may be empty)
    bool needs_copy = false;
    int copy_depth = 0;          // loop level the copy sits at (0 = before all loops)
    bool copy_back = false;      // output copies are written back after the call
};

struct ContractionAlgorithm {
    std::string name;            // loop letters + apostrophes + kernel, e.g. "ca-gemv"
    TensorKernel kind = TensorKernel::Gemm;
    std::vector<char> loops;     // outermost .. innermost
    OperandSlice opa, opb, opc;
    ContractionSpec spec;

    long long invocations() const;      // product of loop extents
    long long kernel_flops() const;     // minimal flops of one kernel call
    bool has_copies() const { return opa.needs_copy || opb.needs_copy || opc.needs_copy; }
};

// every admissible kernel-index mapping x every permutation of the sliced
// loop indices; copies inserted exactly when a matrix operand lacks a
// unit-stride dimension
std::vector<ContractionAlgorithm> generate_algorithms(const ContractionSpec& spec);

struct Tensor {
    std::vector<char> dims;
    std::vector<long> extents;
    std::vector<double> data;

    long stride(char d) const;
    long long size() const;
};

Tensor make_tensor(const ContractionSpec& spec, char which);

// reference execution through the algorithm's loop nest, copies, and BLAS
// kernel calls
Tensor execute_algorithm(const ContractionAlgorithm& alg, const Tensor& a, const Tensor& b);

// naive sum-over-contracted-indices oracle
Tensor naive_contraction(const ContractionSpec& spec, const Tensor& a, const Tensor& b);

// ---- AST-based cache analysis ----

// element count of other data accessed since the operand's last use; the
// three-case back-traversal, starting below loop level `start_depth`
// (= loops.size() for the kernel itself) with M optionally pre-seeded
long long access_distance_ast(const ContractionAlgorithm& alg, char operand_tensor,
                              int start_depth = -1);

struct PrefetchInfo {
    bool prefetched = false;
    bool line_sharing = false;   // loop indexes the operand's first dimension
    long long elems = 0;         // prefetched extent (whole slice or one line)
};

PrefetchInfo detect_prefetch(const ContractionAlgorithm& alg, char operand_tensor);

struct SetupItem {
    bool remote = false;
    char operand = 0;        // tensor letter for operand accesses
    long long elems = 0;     // doubles
};

// operands ordered by descending distance with remote fillers so cumulative
// sizes to the right match each distance; truncated at 5/4 cache at the front
std::vector<SetupItem> build_setup(const std::vector<std::pair<char, long long>>& operand_sizes,
                                   const std::map<char, long long>& distances,
                                   long long cache_elems);

struct MicroBenchmark {
    std::string label;   // base | prefetch-failure | first-iteration(<loop>)
    std::vector<SetupItem> setup;
    double weight = 0;
    Call kernel_call;
    std::vector<Call> copy_calls;  // executed before the kernel
};

// cache-line of 64 bytes = 8 doubles; the 1/8 failure fraction is tied to it
std::vector<MicroBenchmark> build_benchmarks(const ContractionAlgorithm& alg, long long cache_bytes,
                                             long cache_line_bytes = 64);

// benchmark labels and their occurrence fractions (sum to 1)
std::vector<std::pair<std::string, double>> benchmark_weights(const ContractionAlgorithm& alg,
                                                              long cache_line_bytes = 64);

// sum of weight x invocation count x timing plus per-invocation copy timings
double predict_contraction(const ContractionAlgorithm& alg,
                           const std::map<std::string, double>& benchmark_timings,
                           double copy_time_per_invocation = 0.0);

struct RankedContraction {
    std::string name;
    double runtime = 0;     // predicted seconds
    double flops_per_s = 0;
};

std::vector<RankedContraction> rank_contractions(const ContractionSpec& spec, Sampler& sampler,
                                                 long long cache_bytes, int repetitions = 10);

// C-like loop-nest listing (documentation artifact)
std::string render_algorithm(const ContractionAlgorithm& alg);

}  // namespace dlap
