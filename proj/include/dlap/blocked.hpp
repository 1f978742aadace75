#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dlap/kernels.hpp"

// The blocked-algorithm library: matrix traversals in steps of a block size,
// each step applying a fixed list of kernel updates to the exposed
// sub-matrices.  The problem size and block size uniquely determine the call
// sequence.

namespace dlap {

enum class Traversal { DiagSE, DiagNW, Vertical, Horizontal };

struct BlockedAlgorithm {
    std::string name;
    Traversal traversal = Traversal::DiagSE;
    std::string parent;  // operation whose closed-form cost the algorithm realizes
    enum class Shape { Square, RectMN, Sylvester } shape = Shape::Square;
    std::function<std::vector<Call>(long m, long n, long b)> expand;
};

const std::map<std::string, BlockedAlgorithm>& algorithm_library();
const BlockedAlgorithm& algorithm(const std::string& name);
std::vector<std::string> algorithm_names();

// One batch of update calls per traversal step; zero-extent calls included.
std::vector<Call> call_sequence(const std::string& algorithm, long n, long b);
std::vector<Call> call_sequence_mn(const std::string& algorithm, long m, long n, long b);

// Closed-form minimal cost of the algorithm's operation.
long long algorithm_cost(const std::string& algorithm, long n);
long long algorithm_cost_mn(const std::string& algorithm, long m, long n);

// Buffers an algorithm's call sequence executes on, sized and initialized so
// the sequence is runnable (measurement utility for accuracy studies).
void prepare_buffers(const std::string& algorithm, long m, long n, long b, BufferStore& store,
                     std::uint64_t seed = 42);

}  // namespace dlap
