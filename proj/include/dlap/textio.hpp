#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dlap/kernels.hpp"
#include "dlap/sampler.hpp"

namespace dlap {

// Text call-list format: one call per line with positional arguments
// (`dgemm N N 1000 1000 1000 1 A 1000 B 1000 1 C 1000`), buffer declarations
// `dmalloc A 1000000` / `imalloc p 100`, ad-hoc buffers `[100000]`, and the
// command `go` to run the batch.
struct CallScript {
    struct Batch {
        std::vector<Call> calls;
    };
    std::vector<Batch> batches;
    BufferStore store;
};

CallScript parse_call_script(std::istream& in);

// run every batch; one output line per call: ticks and seconds
void run_call_script(std::istream& in, std::ostream& out, Backend& backend,
                     double base_frequency_hz = 0);

// delimiter-separated values with a header row
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::string dsv(char sep = '\t') const;
    static Table parse_dsv(std::istream& in, char sep = '\t');
};


}  // namespace dlap
