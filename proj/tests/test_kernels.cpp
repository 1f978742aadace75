#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "dlap/kernels.hpp"
#include "doctest.h"

using namespace dlap;

TEST_CASE("flop counts match the closed forms") {
    CHECK(flop_count("dgemm", {1000, 1000, 1000}, {'N', 'N'}) == 2000000000LL);
    // side L and R both give 256^3 for square operands
    CHECK(flop_count("dtrsm", {256, 256}, {'L', 'L', 'N', 'N'}) == 16777216LL);
    CHECK(flop_count("dtrsm", {256, 256}, {'R', 'L', 'T', 'N'}) == 16777216LL);
    CHECK(flop_count("dcopy", {5000}) == 0);
    CHECK(flop_count("dpotrf", {800}, {'L'}) == 170986800LL);
}

TEST_CASE("flop count flag symmetry: dtrsm side L<->R with m<->n") {
    std::mt19937 rng(7);
    for (int i = 0; i < 50; ++i) {
        long m = (long)(rng() % 300), n = (long)(rng() % 300);
        CHECK(flop_count("dtrsm", {m, n}, {'L', 'L', 'N', 'N'}) ==
              flop_count("dtrsm", {n, m}, {'R', 'L', 'N', 'N'}));
        CHECK(flop_count("dtrmm", {m, n}, {'L', 'U', 'T', 'U'}) ==
              flop_count("dtrmm", {n, m}, {'R', 'U', 'T', 'U'}));
        CHECK(flop_count("dsymm", {m, n}, {'L', 'L'}) == flop_count("dsymm", {n, m}, {'R', 'L'}));
    }
}

TEST_CASE("minimal data movement") {
    CHECK(min_data_movement("ddot", {1000}) == 2000);
    long n = 700;
    CHECK(min_data_movement("dgemm", {n, n, n}, {'N', 'N'}) == 4 * n * n);
    CHECK(min_data_movement("dgemm", {0, 0, 0}, {'N', 'N'}) == 0);
    CHECK(min_data_movement("dtrsm", {0, 0}, {'L', 'L', 'N', 'N'}) == 0);
}

TEST_CASE("data movement >= data volume >= 0 for random valid sizes") {
    std::mt19937 rng(11);
    for (const auto& [name, k] : kernel_registry()) {
        for (int rep = 0; rep < 25; ++rep) {
            std::vector<long> sizes;
            for (size_t i = 0; i < k.size_args.size(); ++i) sizes.push_back((long)(rng() % 200));
            if (name == "dlaswp") {  // k1 <= k2 within the row range
                sizes = {(long)(rng() % 200), 1, (long)(rng() % 100) + 1};
            }
            std::vector<char> flags;
            for (int fi : k.flag_args) flags.push_back(k.args[fi].allowed[rng() % k.args[fi].allowed.size()]);
            long long vol = min_data_volume(name, sizes, flags);
            long long mov = min_data_movement(name, sizes, flags);
            CHECK(vol >= 0);
            CHECK(mov >= vol);
            CHECK(flop_count(name, sizes, flags) >= 0);
        }
    }
}

TEST_CASE("arithmetic intensity") {
    CHECK(arithmetic_intensity("ddot", {123}) == doctest::Approx(1.0 / 8.0));
    CHECK(arithmetic_intensity("dgemm", {320, 320, 320}, {'N', 'N'}) == doctest::Approx(320.0 / 16.0));
    double ai = arithmetic_intensity("dgemv", {1000, 1000}, {'N'});
    CHECK(ai == doctest::Approx(0.25).epsilon(0.01));
    CHECK_THROWS(arithmetic_intensity("dgemm", {0, 0, 0}, {'N', 'N'}));
}

TEST_CASE("roofline limit") {
    MachineSpec sandy;
    sandy.name = "SandyBridge";
    sandy.base_frequency = 2.6e9;
    sandy.flops_per_cycle = 8;
    sandy.cores = 8;
    sandy.peak_bandwidth = 16.25e9;  // measured single-core bandwidth
    sandy.caches = {{32 * 1024, 64, 8}, {256 * 1024, 64, 8}, {20 * 1024 * 1024, 64, 20}};
    sandy.validate();
    CHECK(roofline_limit(sandy, 0.0) == 0.0);
    CHECK(roofline_limit(sandy, 62.5) == doctest::Approx(20.8e9));
    double crossing = sandy.peak_performance(1) / sandy.peak_bandwidth;
    CHECK(crossing == doctest::Approx(1.28));
    CHECK(sandy.peak_bandwidth * crossing == doctest::Approx(sandy.peak_performance(1)));
}

TEST_CASE("unknown kernels and invalid flags are rejected") {
    CHECK_THROWS(flop_count("sgemm", {10, 10, 10}, {'N', 'N'}));
    CHECK_THROWS(flop_count("dtrsm", {10, 10}, {'X', 'L', 'N', 'N'}));
    CHECK_THROWS(flop_count("dgemm", {-1, 10, 10}, {'N', 'N'}));
}

namespace {

Call gemm_call(long m, long n, long k, char ta, char tb, double alpha, double beta, long ld) {
    return make_call("dgemm", {ta, tb}, {m, n, k}, {alpha, beta},
                     {{"A", 0}, {"B", 0}, {"C", 0}}, {ld, ld, ld});
}

}  // namespace

TEST_CASE("dgemm identity and zero-size semantics") {
    BufferStore store;
    double* a = store.alloc("A", 4);
    double* b = store.alloc("B", 4);
    double* c = store.alloc("C", 4);
    a[0] = a[3] = 1.0;
    for (int i = 0; i < 4; ++i) b[i] = (double)(i + 1);
    execute(gemm_call(2, 2, 2, 'N', 'N', 1.0, 0.0, 2), store);
    for (int i = 0; i < 4; ++i) CHECK(c[i] == b[i]);

    // size-zero calls leave all buffers bit-identical
    std::vector<double> before(c, c + 4);
    execute(gemm_call(2, 2, 0, 'N', 'N', 1.0, 1.0, 2), store);
    for (int i = 0; i < 4; ++i) CHECK(c[i] == before[(size_t)i]);
}

TEST_CASE("dgemm matches a naive triple loop for all transposes") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    for (char ta : {'N', 'T'})
        for (char tb : {'N', 'T'})
            for (int rep = 0; rep < 3; ++rep) {
                long m = 1 + (long)(rng() % 16), n = 1 + (long)(rng() % 16), k = 1 + (long)(rng() % 16);
                long ld = 20;
                BufferStore store;
                double* a = store.alloc("A", (size_t)(ld * ld));
                double* b = store.alloc("B", (size_t)(ld * ld));
                double* c = store.alloc("C", (size_t)(ld * ld));
                for (long i = 0; i < ld * ld; ++i) {
                    a[i] = u(rng);
                    b[i] = u(rng);
                    c[i] = u(rng);
                }
                std::vector<double> ref(c, c + ld * ld);
                execute(gemm_call(m, n, k, ta, tb, 1.5, -0.5, ld), store);
                for (long j = 0; j < n; ++j)
                    for (long i = 0; i < m; ++i) {
                        double acc = 0;
                        for (long l = 0; l < k; ++l) {
                            double av = ta == 'N' ? a[i + l * ld] : a[l + i * ld];
                            double bv = tb == 'N' ? b[l + j * ld] : b[j + l * ld];
                            acc += av * bv;
                        }
                        double want = 1.5 * acc - 0.5 * ref[(size_t)(i + j * ld)];
                        CHECK(std::fabs(c[i + j * ld] - want) <=
                              1e-12 * std::max(1.0, std::fabs(want)));
                    }
            }
}

TEST_CASE("dtrsm diagonal solve") {
    BufferStore store;
    double* a = store.alloc("A", 4);
    double* b = store.alloc("B", 4);
    a[0] = a[3] = 2.0;
    for (int i = 0; i < 4; ++i) b[i] = 1.0;
    execute(make_call("dtrsm", {'L', 'L', 'N', 'N'}, {2, 2}, {1.0}, {{"A", 0}, {"B", 0}}, {2, 2}),
            store);
    for (int i = 0; i < 4; ++i) CHECK(b[i] == doctest::Approx(0.5));
}

TEST_CASE("dtrsm detects a singular triangle") {
    BufferStore store;
    double* a = store.alloc("A", 4);
    store.alloc("B", 4);
    a[0] = 1.0;
    a[3] = 0.0;  // zero diagonal with diag=N
    CHECK_THROWS(execute(
        make_call("dtrsm", {'L', 'L', 'N', 'N'}, {2, 2}, {1.0}, {{"A", 0}, {"B", 0}}, {2, 2}), store));
}

TEST_CASE("dpotf2 recovers the Cholesky factor of L L'") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    long n = 4, ld = 4;
    std::vector<double> l((size_t)(ld * n), 0.0);
    for (long j = 0; j < n; ++j) {
        l[(size_t)(j + j * ld)] = 1.0 + u(rng);
        for (long i = j + 1; i < n; ++i) l[(size_t)(i + j * ld)] = u(rng);
    }
    BufferStore store;
    double* a = store.alloc("A", (size_t)(ld * n));
    for (long j = 0; j < n; ++j)
        for (long i = j; i < n; ++i) {
            double acc = 0;
            for (long k = 0; k <= j; ++k) acc += l[(size_t)(i + k * ld)] * l[(size_t)(j + k * ld)];
            a[i + j * ld] = acc;
        }
    execute(make_call("dpotf2", {'L'}, {n}, {}, {{"A", 0}}, {ld}), store);
    for (long j = 0; j < n; ++j)
        for (long i = j; i < n; ++i)
            CHECK(std::fabs(a[i + j * ld] - l[(size_t)(i + j * ld)]) < 1e-12);
}

TEST_CASE("dtrti2 inverts against dtrmm round trip") {
    long n = 6, ld = 6;
    BufferStore store;
    double* a = store.alloc("A", (size_t)(ld * n));
    double* b = store.alloc("B", (size_t)(ld * n));
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(0.2, 1.0);
    for (long j = 0; j < n; ++j) {
        a[j + j * ld] = 2.0 + u(rng);
        for (long i = j + 1; i < n; ++i) a[i + j * ld] = u(rng);
    }
    std::vector<double> orig(a, a + ld * n);
    execute(make_call("dtrti2", {'L', 'N'}, {n}, {}, {{"A", 0}}, {ld}), store);
    // B := inv(A); orig * B should be I
    for (long j = 0; j < n; ++j)
        for (long i = 0; i < n; ++i) b[i + j * ld] = i >= j ? a[i + j * ld] : 0.0;
    for (long j = 0; j < n; ++j)
        for (long i = 0; i < n; ++i) {
            double acc = 0;
            for (long k = 0; k < n; ++k) {
                double ov = i >= k ? orig[(size_t)(i + k * ld)] : 0.0;
                acc += ov * b[k + j * ld];
            }
            CHECK(std::fabs(acc - (i == j ? 1.0 : 0.0)) < 1e-10);
        }
}

TEST_CASE("dgeqr2 reproduces A = Q R") {
    long m = 6, n = 4, ld = m;
    BufferStore store;
    double* a = store.alloc("A", (size_t)(ld * n));
    store.alloc("tau", (size_t)n);
    store.alloc("work", (size_t)n);
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<double> orig((size_t)(ld * n));
    for (auto& v : orig) v = u(rng);
    for (size_t i = 0; i < orig.size(); ++i) a[i] = orig[i];
    execute(make_call("dgeqr2", {}, {m, n}, {}, {{"A", 0}, {"tau", 0}, {"work", 0}}, {ld}), store);
    double* tau = store.get("tau");
    // accumulate Q from the reflectors and check Q R = orig
    std::vector<double> q((size_t)(m * m), 0.0);
    for (long i = 0; i < m; ++i) q[(size_t)(i + i * m)] = 1.0;
    for (long j = n - 1; j >= 0; --j) {
        std::vector<double> v((size_t)m, 0.0);
        v[(size_t)j] = 1.0;
        for (long i = j + 1; i < m; ++i) v[(size_t)i] = a[i + j * ld];
        for (long col = 0; col < m; ++col) {
            double w = 0;
            for (long i = j; i < m; ++i) w += v[(size_t)i] * q[(size_t)(i + col * m)];
            w *= tau[j];
            for (long i = j; i < m; ++i) q[(size_t)(i + col * m)] -= v[(size_t)i] * w;
        }
    }
    // Q' * orig should equal R (the upper triangular part left in A)
    for (long j = 0; j < n; ++j)
        for (long i = 0; i < m; ++i) {
            double acc = 0;
            for (long k = 0; k < m; ++k) acc += q[(size_t)(k + i * m)] * orig[(size_t)(k + j * ld)];
            double want = i <= j && i < n ? a[i + j * ld] : 0.0;
            CHECK(std::fabs(acc - want) < 1e-10);
        }
}

TEST_CASE("dtrsyl solves A X + X B = C") {
    long m = 5, n = 4;
    BufferStore store;
    double* a = store.alloc("A", (size_t)(m * m));
    double* b = store.alloc("B", (size_t)(n * n));
    double* c = store.alloc("C", (size_t)(m * n));
    store.alloc("scale", 1);
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    for (long j = 0; j < m; ++j)
        for (long i = 0; i <= j; ++i) a[i + j * m] = i == j ? 2.0 + u(rng) : u(rng);
    for (long j = 0; j < n; ++j)
        for (long i = 0; i <= j; ++i) b[i + j * n] = i == j ? 1.0 + u(rng) : u(rng);
    std::vector<double> rhs((size_t)(m * n));
    for (auto& v : rhs) v = u(rng);
    for (size_t i = 0; i < rhs.size(); ++i) c[i] = rhs[i];
    execute(make_call("dtrsyl", {'N', 'N'}, {m, n}, {1.0},
                      {{"A", 0}, {"B", 0}, {"C", 0}, {"scale", 0}}, {m, n, m}),
            store);
    for (long j = 0; j < n; ++j)
        for (long i = 0; i < m; ++i) {
            double acc = 0;
            for (long k = i; k < m; ++k) acc += a[i + k * m] * c[k + j * m];
            for (long k = 0; k <= j; ++k) acc += c[i + k * m] * b[k + j * n];
            CHECK(std::fabs(acc - rhs[(size_t)(i + j * m)]) < 1e-9);
        }
}

TEST_CASE("out-of-bounds bindings are rejected") {
    BufferStore store;
    store.alloc("A", 3);
    store.alloc("B", 4);
    CHECK_THROWS(execute(gemm_call(2, 2, 2, 'N', 'N', 1.0, 0.0, 2), store));
}

TEST_CASE("negative increments address vectors from the end") {
    BufferStore store;
    double* x = store.alloc("x", 4);
    double* y = store.alloc("y", 4);
    for (int i = 0; i < 4; ++i) x[i] = (double)(i + 1);
    execute(make_call("dcopy", {}, {4}, {}, {{"x", 0}, {"y", 0}}, {}, {-1, 1}), store);
    CHECK(y[0] == 4.0);
    CHECK(y[3] == 1.0);
    execute(make_call("daxpy", {}, {4}, {2.0}, {{"x", 0}, {"y", 0}}, {}, {1, -1}), store);
    // y_logical(i) = y[3 - i]; y_logical += 2 x
    CHECK(y[3] == 1.0 + 2.0 * 1.0);
    CHECK(y[0] == 4.0 + 2.0 * 4.0);
}

TEST_CASE("level-2 kernels match naive loops") {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> u(-1, 1);
    long m = 7, n = 5, ld = 9;
    BufferStore store;
    double* a = store.alloc("A", (size_t)(ld * ld));
    double* x = store.alloc("x", 16);
    double* y = store.alloc("y", 16);
    for (long i = 0; i < ld * ld; ++i) a[i] = u(rng);
    for (int i = 0; i < 16; ++i) {
        x[i] = u(rng);
        y[i] = u(rng);
    }
    std::vector<double> a0(a, a + ld * ld), x0(x, x + 16), y0(y, y + 16);

    SUBCASE("dgemv N and T") {
        for (char trans : {'N', 'T'}) {
            for (int i = 0; i < 16; ++i) y[i] = y0[(size_t)i];
            execute(make_call("dgemv", {trans}, {m, n}, {1.5, -0.5},
                              {{"A", 0}, {"x", 0}, {"y", 0}}, {ld}, {1, 1}),
                    store);
            long rows = trans == 'N' ? m : n, cols = trans == 'N' ? n : m;
            for (long i = 0; i < rows; ++i) {
                double acc = 0;
                for (long j = 0; j < cols; ++j)
                    acc += (trans == 'N' ? a0[(size_t)(i + j * ld)] : a0[(size_t)(j + i * ld)]) *
                           x0[(size_t)j];
                CHECK(y[i] == doctest::Approx(1.5 * acc - 0.5 * y0[(size_t)i]).epsilon(1e-12));
            }
        }
    }

    SUBCASE("dger with strided vectors") {
        execute(make_call("dger", {}, {m, n}, {2.0}, {{"x", 0}, {"y", 0}, {"A", 0}}, {ld}, {2, 1}),
                store);
        for (long j = 0; j < n; ++j)
            for (long i = 0; i < m; ++i)
                CHECK(a[i + j * ld] == doctest::Approx(a0[(size_t)(i + j * ld)] +
                                                       2.0 * x0[(size_t)(2 * i)] * y0[(size_t)j]));
    }

    SUBCASE("dtrsv round-trips against the triangular product") {
        // make the triangle well conditioned
        for (long d = 0; d < ld; ++d) a[d + d * ld] = 4.0 + u(rng);
        std::vector<double> rhs(x, x + 16);
        execute(make_call("dtrsv", {'L', 'N', 'N'}, {m}, {}, {{"A", 0}, {"x", 0}}, {ld}, {1}),
                store);
        for (long i = 0; i < m; ++i) {
            double acc = 0;
            for (long j = 0; j <= i; ++j) acc += a[i + j * ld] * x[j];
            CHECK(acc == doctest::Approx(rhs[(size_t)i]).epsilon(1e-10));
        }
    }
}

TEST_CASE("dtrsm and dtrmm are inverse operations for all sixteen flag combinations") {
    std::mt19937 rng(43);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    long m = 6, n = 4, ld = 8;
    for (char side : {'L', 'R'})
        for (char uplo : {'L', 'U'})
            for (char trans : {'N', 'T'})
                for (char diag : {'N', 'U'}) {
                    BufferStore store;
                    double* a = store.alloc("A", (size_t)(ld * ld));
                    double* b = store.alloc("B", (size_t)(ld * ld));
                    for (long i = 0; i < ld * ld; ++i) {
                        a[i] = u(rng);
                        b[i] = u(rng);
                    }
                    for (long d = 0; d < ld; ++d) a[d + d * ld] = 3.0 + u(rng);
                    std::vector<double> b0(b, b + ld * ld);
                    auto call = [&](const char* k) {
                        return make_call(k, {side, uplo, trans, diag}, {m, n}, {1.0},
                                         {{"A", 0}, {"B", 0}}, {ld, ld});
                    };
                    execute(call("dtrsm"), store);
                    execute(call("dtrmm"), store);
                    for (long j = 0; j < n; ++j)
                        for (long i = 0; i < m; ++i)
                            CHECK(b[i + j * ld] ==
                                  doctest::Approx(b0[(size_t)(i + j * ld)]).epsilon(1e-10));
                }
}

TEST_CASE("symmetric rank updates match naive expansions") {
    std::mt19937 rng(47);
    std::uniform_real_distribution<double> u(-1, 1);
    long n = 5, k = 4, ld = 7;
    for (char trans : {'N', 'T'}) {
        BufferStore store;
        double* a = store.alloc("A", (size_t)(ld * ld));
        double* b = store.alloc("B", (size_t)(ld * ld));
        double* c = store.alloc("C", (size_t)(ld * ld));
        for (long i = 0; i < ld * ld; ++i) {
            a[i] = u(rng);
            b[i] = u(rng);
            c[i] = u(rng);
        }
        std::vector<double> c0(c, c + ld * ld);
        execute(make_call("dsyr2k", {'L', trans}, {n, k}, {1.5, -1.0},
                          {{"A", 0}, {"B", 0}, {"C", 0}}, {ld, ld, ld}),
                store);
        for (long j = 0; j < n; ++j)
            for (long i = j; i < n; ++i) {
                double acc = 0;
                for (long l = 0; l < k; ++l) {
                    double ail = trans == 'N' ? a[i + l * ld] : a[l + i * ld];
                    double ajl = trans == 'N' ? a[j + l * ld] : a[l + j * ld];
                    double bil = trans == 'N' ? b[i + l * ld] : b[l + i * ld];
                    double bjl = trans == 'N' ? b[j + l * ld] : b[l + j * ld];
                    acc += ail * bjl + bil * ajl;
                }
                CHECK(c[i + j * ld] ==
                      doctest::Approx(1.5 * acc - c0[(size_t)(i + j * ld)]).epsilon(1e-12));
            }
    }
}

TEST_CASE("dlauu2 upper computes U U'") {
    long n = 4, ld = 4;
    BufferStore store;
    double* a = store.alloc("A", (size_t)(ld * n));
    std::mt19937 rng(53);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    for (long j = 0; j < n; ++j)
        for (long i = 0; i <= j; ++i) a[i + j * ld] = u(rng);
    std::vector<double> u0(a, a + ld * n);
    execute(make_call("dlauu2", {'U'}, {n}, {}, {{"A", 0}}, {ld}), store);
    for (long j = 0; j < n; ++j)
        for (long i = 0; i <= j; ++i) {
            double acc = 0;
            for (long l = std::max(i, j); l < n; ++l)
                acc += u0[(size_t)(i + l * ld)] * u0[(size_t)(j + l * ld)];
            CHECK(a[i + j * ld] == doctest::Approx(acc).epsilon(1e-12));
        }
}

// the external-backend path: marshal calls into a real BLAS/LAPACK build and
// compare against the reference kernels
#include <filesystem>

#include "dlap/backend.hpp"

TEST_CASE("shared-library backend matches the reference kernels") {
    const char* blas_path = "/usr/lib/x86_64-linux-gnu/libblas.so.3";
    const char* lapack_path = "/usr/lib/x86_64-linux-gnu/liblapack.so.3";
    if (!std::filesystem::exists(blas_path)) return;

    std::mt19937 rng(71);
    std::uniform_real_distribution<double> u(-1, 1);
    auto fill = [&](BufferStore& s, const char* name, size_t n) {
        double* p = s.alloc(name, n);
        for (size_t i = 0; i < n; ++i) p[i] = u(rng);
        return p;
    };

    SUBCASE("dgemm") {
        SharedLibBackend blas(blas_path);
        BufferStore ours, theirs;
        std::mt19937 save = rng;
        fill(ours, "A", 64);
        fill(ours, "B", 64);
        fill(ours, "C", 64);
        rng = save;
        fill(theirs, "A", 64);
        fill(theirs, "B", 64);
        fill(theirs, "C", 64);
        Call c = make_call("dgemm", {'N', 'T'}, {7, 6, 5}, {1.5, -0.5},
                           {{"A", 0}, {"B", 0}, {"C", 0}}, {8, 8, 8});
        execute(c, ours);
        blas.execute(c, theirs);
        for (int i = 0; i < 64; ++i)
            CHECK(ours.get("C")[i] == doctest::Approx(theirs.get("C")[i]).epsilon(1e-12));
    }

    SUBCASE("dtrsm") {
        SharedLibBackend blas(blas_path);
        BufferStore ours, theirs;
        for (auto* s : {&ours, &theirs}) {
            double* a = s->alloc("A", 64);
            double* b = s->alloc("B", 64);
            std::mt19937 local(5);
            std::uniform_real_distribution<double> v(0.2, 1.0);
            for (int i = 0; i < 64; ++i) {
                a[i] = v(local);
                b[i] = v(local);
            }
            for (int d = 0; d < 8; ++d) a[d + 8 * d] = 4.0 + v(local);
        }
        Call c = make_call("dtrsm", {'R', 'L', 'T', 'N'}, {6, 7}, {1.0}, {{"A", 0}, {"B", 0}},
                           {8, 8});
        execute(c, ours);
        blas.execute(c, theirs);
        for (int i = 0; i < 64; ++i)
            CHECK(ours.get("B")[i] == doctest::Approx(theirs.get("B")[i]).epsilon(1e-10));
    }

    SUBCASE("dpotf2 through LAPACK") {
        if (!std::filesystem::exists(lapack_path)) return;
        SharedLibBackend lapack(lapack_path);
        BufferStore ours, theirs;
        for (auto* s : {&ours, &theirs}) {
            double* a = s->alloc("A", 36);
            std::mt19937 local(9);
            std::uniform_real_distribution<double> v(0.1, 1.0);
            std::vector<double> g(36);
            for (auto& x : g) x = v(local);
            for (int j = 0; j < 6; ++j)
                for (int i = 0; i < 6; ++i) {
                    double acc = i == j ? 1.0 : 0.0;
                    for (int k = 0; k <= std::min(i, j); ++k) acc += g[(size_t)(i + 6 * k)] * g[(size_t)(j + 6 * k)];
                    a[i + 6 * j] = acc;
                }
        }
        Call c = make_call("dpotf2", {'L'}, {6}, {}, {{"A", 0}}, {6});
        execute(c, ours);
        lapack.execute(c, theirs);
        for (int j = 0; j < 6; ++j)
            for (int i = j; i < 6; ++i)
                CHECK(ours.get("A")[i + 6 * j] ==
                      doctest::Approx(theirs.get("A")[i + 6 * j]).epsilon(1e-10));
    }
}
