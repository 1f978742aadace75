#include "dlap/textio.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace dlap {

namespace {

Call parse_call_line(const std::string& kernel_name, std::istringstream& is, BufferStore& store,
                     int& anon_counter, int lineno) {
    auto fail = [&](const std::string& why) {
        throw std::invalid_argument("line " + std::to_string(lineno) + ": " + why);
    };
    if (!has_kernel(kernel_name)) fail("unknown kernel '" + kernel_name + "'");
    const auto& k = kernel(kernel_name);
    Call c;
    c.kernel = kernel_name;
    std::string tok;
    for (const auto& arg : k.args) {
        if (arg.role == ArgRole::Info) continue;  // info outputs are implicit
        if (!(is >> tok)) fail("missing argument '" + arg.name + "'");
        try {
            switch (arg.role) {
                case ArgRole::Flag:
                    if (tok.size() != 1) fail("flag '" + arg.name + "' must be one character");
                    c.flags.push_back(tok[0]);
                    break;
                case ArgRole::Size: c.sizes.push_back(std::stol(tok)); break;
                case ArgRole::Scalar: c.scalars.push_back(std::stod(tok)); break;
                case ArgRole::LeadingDim: c.lds.push_back(std::stol(tok)); break;
                case ArgRole::Increment: c.incs.push_back(std::stol(tok)); break;
                case ArgRole::Data: {
                    if (tok.front() == '[' && tok.back() == ']') {
                        long n = std::stol(tok.substr(1, tok.size() - 2));
                        std::string name = "__anon" + std::to_string(anon_counter++);
                        if (arg.name == "ipiv")
                            store.alloc_int(name, (size_t)n);
                        else
                            store.alloc(name, (size_t)n);
                        c.operands.push_back(Operand{name, 0});
                    } else {
                        if (!store.has(tok)) fail("unknown buffer '" + tok + "'");
                        c.operands.push_back(Operand{tok, 0});
                    }
                    break;
                }
                case ArgRole::Info: break;
            }
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception&) {
            fail("cannot parse '" + tok + "' for argument '" + arg.name + "'");
        }
    }
    std::string extra;
    if (is >> extra) fail("trailing token '" + extra + "'");
    try {
        k.validate(c);
    } catch (const std::exception& e) {
        fail(e.what());
    }
    return c;
}

}  // namespace

CallScript parse_call_script(std::istream& in) {
    CallScript script;
    CallScript::Batch batch;
    int anon = 0, lineno = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream is(line);
        std::string head;
        if (!(is >> head) || head[0] == '#') continue;
        if (head == "go") {
            script.batches.push_back(std::move(batch));
            batch = {};
            continue;
        }
        if (head == "dmalloc" || head == "imalloc") {
            std::string name;
            long n = 0;
            if (!(is >> name >> n) || n <= 0)
                throw std::invalid_argument("line " + std::to_string(lineno) + ": malformed " + head);
            if (head == "dmalloc") {
                double* p = script.store.alloc(name, (size_t)n);
                // randomized operands keep solves and factorizations sane
                std::uint64_t h = 0x9e3779b97f4a7c15ull;
                for (char ch : name) h = (h ^ (std::uint64_t)ch) * 0x100000001b3ull;
                for (long i = 0; i < n; ++i) {
                    h = h * 6364136223846793005ull + 1442695040888963407ull;
                    p[i] = 0.5 + (double)(h >> 40) / (double)(1 << 24);
                }
            } else {
                script.store.alloc_int(name, (size_t)n);
            }
            continue;
        }
        batch.calls.push_back(parse_call_line(head, is, script.store, anon, lineno));
    }
    if (!batch.calls.empty()) script.batches.push_back(std::move(batch));
    return script;
}

void run_call_script(std::istream& in, std::ostream& out, Backend& backend,
                     double base_frequency_hz) {
    CallScript script = parse_call_script(in);
    Sampler sampler(backend, base_frequency_hz);
    for (const auto& batch : script.batches) {
        MeasurementPlan plan;
        plan.calls = batch.calls;
        plan.repetitions = 1;
        plan.warm = WarmPolicy::Cold;
        auto timings = sampler.run_plan(plan, script.store);
        double tick = backend.clock()                  ? backend.clock()->tick_seconds()
                      : base_frequency_hz > 0          ? 1.0 / base_frequency_hz
                                                       : 1e-9;
        for (const auto& t : timings) {
            long long ticks = (long long)llround(t[0] / tick);
            out << ticks << "\t" << t[0] << "\n";
        }
    }
}

std::string Table::dsv(char sep) const {
    std::ostringstream os;
    for (size_t i = 0; i < columns.size(); ++i) os << (i ? std::string(1, sep) : "") << columns[i];
    os << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) os << (i ? std::string(1, sep) : "") << row[i];
        os << "\n";
    }
    return os.str();
}

Table Table::parse_dsv(std::istream& in, char sep) {
    Table t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream is(line);
        while (std::getline(is, cell, sep)) cells.push_back(cell);
        if (first) {
            t.columns = std::move(cells);
            first = false;
        } else {
            if (cells.size() != t.columns.size())
                throw std::invalid_argument("ragged row in DSV input");
            t.rows.push_back(std::move(cells));
        }
    }
    return t;
}


}  // namespace dlap
