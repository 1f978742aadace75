#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "dlap/backend.hpp"
#include "dlap/sampler.hpp"
#include "doctest.h"

using namespace dlap;

namespace {

// counts executions and records the interleaved order
struct TraceBackend final : Backend {
    std::vector<std::string> trace;
    void execute(const Call& c, BufferStore&) override { trace.push_back(c.kernel); }
    std::string id() const override { return "trace"; }
};

Call tiny_call(const std::string& kernel = "ddot", long n = 64) {
    return make_call(kernel, {}, {n}, {}, {{"x", 0}, {"y", 0}}, {}, {1, 1});
}

}  // namespace

TEST_CASE("summarize: paper measurement example") {
    std::vector<double> t = {16.25e-3, 16.27e-3, 16.26e-3, 16.27e-3, 16.26e-3,
                             16.26e-3, 16.28e-3, 16.27e-3, 16.26e-3, 16.26e-3};
    SummaryStats s = summarize(t);
    CHECK(s.min == doctest::Approx(16.25e-3));
    CHECK(s.median == doctest::Approx(16.26e-3));
    CHECK(s.max == doctest::Approx(16.28e-3));
    CHECK(s.mean == doctest::Approx(16.264e-3));
    // population std of this rounded sample is exactly 8 us
    CHECK(s.stddev == doctest::Approx(8.0e-6).epsilon(1e-9));
}

TEST_CASE("summarize: single value and hand-computed sample") {
    SummaryStats one = summarize({0.125});
    CHECK(one.min == 0.125);
    CHECK(one.median == 0.125);
    CHECK(one.max == 0.125);
    CHECK(one.mean == 0.125);
    CHECK(one.stddev == 0.0);

    SummaryStats s = summarize({1.0, 2.0, 3.0});
    CHECK(s.mean == doctest::Approx(2.0));
    CHECK(s.stddev == doctest::Approx(std::sqrt(2.0 / 3.0)));
    CHECK_THROWS(summarize({}));
}

TEST_CASE("summary ordering invariant on random samples") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> t;
        size_t n = 1 + rng() % 17;
        for (size_t i = 0; i < n; ++i) t.push_back(u(rng));
        SummaryStats s = summarize(t);
        CHECK(s.min <= s.median);
        CHECK(s.median <= s.max);
        CHECK(s.min <= s.mean);
        CHECK(s.mean <= s.max);
        CHECK(s.stddev >= 0);
    }
}

TEST_CASE("run_plan produces the requested repetitions with nonnegative timings") {
    ReferenceBackend backend;
    Sampler sampler(backend);
    BufferStore store;
    store.alloc("x", 64);
    store.alloc("y", 64);
    MeasurementPlan plan;
    plan.calls = {tiny_call()};
    plan.repetitions = 5;
    auto out = sampler.run_plan(plan, store);
    REQUIRE(out.size() == 1);
    CHECK(out[0].size() == 5);
    for (double t : out[0]) CHECK(t >= 0);
}

TEST_CASE("shuffled double-execution: 2 calls x 3 reps = 6 timed + 6 warm runs") {
    TraceBackend backend;
    Sampler sampler(backend);
    BufferStore store;
    MeasurementPlan plan;
    plan.calls = {tiny_call("ddot"), tiny_call("dcopy")};
    plan.repetitions = 3;
    plan.shuffle = true;
    plan.seed = 7;
    auto out = sampler.run_plan(plan, store);
    CHECK(out[0].size() == 3);
    CHECK(out[1].size() == 3);
    CHECK(backend.trace.size() == 12);  // warm + timed per repetition
    // double execution: consecutive pairs hit the same kernel
    for (size_t i = 0; i < backend.trace.size(); i += 2) CHECK(backend.trace[i] == backend.trace[i + 1]);
    int ddot_runs = 0;
    for (size_t i = 0; i < 6; ++i) ddot_runs += backend.trace[2 * i] == "ddot";
    CHECK(ddot_runs == 3);
}

TEST_CASE("synthetic clock: constant model yields exact timings") {
    SyntheticBackend backend([](const Call&) { return 1e-3; });
    Sampler sampler(backend);
    BufferStore store;
    MeasurementPlan plan;
    plan.calls = {tiny_call()};
    plan.repetitions = 4;
    auto out = sampler.run_plan(plan, store);
    for (double t : out[0]) CHECK(t == doctest::Approx(1e-3).epsilon(1e-9));
}

TEST_CASE("run_plan is bit-reproducible under a fixed seed") {
    auto run = [](std::uint64_t seed) {
        SyntheticBackend backend(synthetic_poly_model());
        Sampler sampler(backend);
        BufferStore store;
        MeasurementPlan plan;
        for (long n : {64L, 128L, 192L}) plan.calls.push_back(tiny_call("ddot", n));
        plan.repetitions = 5;
        plan.shuffle = true;
        plan.seed = seed;
        return sampler.run_plan(plan, store);
    };
    auto a = run(42), b = run(42);
    CHECK(a == b);
    CHECK(shuffled_indices(100, 1) == shuffled_indices(100, 1));
    CHECK(shuffled_indices(100, 1) != shuffled_indices(100, 2));
}

TEST_CASE("apply_precondition touches operands and remote scratch in order") {
    ReferenceBackend backend;
    Sampler sampler(backend);
    sampler.set_scratch_bytes(1 << 20);
    BufferStore store;
    store.alloc("C", 1024);
    store.alloc("A", 1024);

    std::vector<std::pair<std::string, long long>> log;
    sampler.set_access_observer(
        [&](const std::string& what, long long bytes) { log.push_back({what, bytes}); });

    SUBCASE("empty list is a no-op") {
        sampler.apply_precondition({}, store);
        CHECK(log.empty());
    }

    SUBCASE("remote access touches the requested bytes") {
        long long cache = 4096;
        CachePrecondition pre;
        pre.accesses.push_back({true, {}, cache * 5 / 4});
        sampler.apply_precondition(pre, store);
        REQUIRE(log.size() == 1);
        CHECK(log[0].first == "remote");
        CHECK(log[0].second == cache * 5 / 4);
    }

    SUBCASE("touch order is preserved") {
        CachePrecondition pre;
        pre.accesses.push_back({false, {"C", 0}, 512});
        pre.accesses.push_back({true, {}, 2048});
        pre.accesses.push_back({false, {"A", 0}, 512});
        sampler.apply_precondition(pre, store);
        REQUIRE(log.size() == 3);
        CHECK(log[0].first == "C");
        CHECK(log[1].first == "remote");
        CHECK(log[2].first == "A");
    }

    SUBCASE("scratch too small") {
        sampler.set_scratch_bytes(128);
        CachePrecondition pre;
        pre.accesses.push_back({true, {}, 4096});
        CHECK_THROWS(sampler.apply_precondition(pre, store));
    }
}

TEST_CASE("explicit-warm runs each call once before the timed phase") {
    TraceBackend backend;
    Sampler sampler(backend);
    BufferStore store;
    MeasurementPlan plan;
    plan.calls = {tiny_call("ddot"), tiny_call("dcopy")};
    plan.repetitions = 2;
    plan.warm = WarmPolicy::ExplicitWarm;
    sampler.run_plan(plan, store);
    REQUIRE(backend.trace.size() == 6);  // 2 warm + 4 timed
    CHECK(backend.trace[0] == "ddot");
    CHECK(backend.trace[1] == "dcopy");

    backend.trace.clear();
    plan.warm = WarmPolicy::Cold;
    sampler.run_plan(plan, store);
    CHECK(backend.trace.size() == 4);  // timed runs only
}

TEST_CASE("cycle-counter timing converts through the base frequency") {
    if (!CycleClock::available()) return;
    ReferenceBackend backend;
    Sampler sampler(backend, 2.6e9);
    BufferStore store;
    store.alloc("x", 64);
    store.alloc("y", 64);
    MeasurementPlan plan;
    plan.calls = {tiny_call()};
    plan.repetitions = 3;
    plan.timer = TimerKind::CycleCounter;
    auto out = sampler.run_plan(plan, store);
    for (double t : out[0]) {
        CHECK(t >= 0);
        CHECK(t < 1.0);
    }
    // without a base frequency the cycle counter is unavailable
    Sampler bare(backend);
    CHECK_THROWS(bare.run_plan(plan, store));
}
