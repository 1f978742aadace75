#include <cmath>
#include <cstring>
#include <vector>

#include "dlap/kernels.hpp"

// Naive reference implementations of the shipped kernel set.  Column-major
// storage, explicit leading dimensions, BLAS increment conventions (negative
// increments address the vector from its end).

namespace dlap {

namespace {

struct Vec {
    double* p;
    long n, inc;
    double& operator()(long i) const { return p[inc >= 0 ? i * inc : (n - 1 - i) * (-inc)]; }
};

struct Mat {
    double* p;
    long ld;
    double& operator()(long i, long j) const { return p[i + j * ld]; }
};

double* bind(const Call& c, BufferStore& s, int op, long min_extent) {
    const Operand& o = c.operands.at(op);
    double* base = s.get(o.buffer);
    long avail = (long)s.size(o.buffer) - o.offset;
    if (o.offset < 0 || avail < min_extent)
        throw std::out_of_range(c.kernel + ": operand " + o.buffer + " out of bounds");
    return base + o.offset;
}

long mat_extent(long rows, long cols, long ld) { return cols > 0 ? (cols - 1) * ld + rows : 0; }
long vec_extent(long n, long inc) { return n > 0 ? (n - 1) * std::labs(inc) + 1 : 0; }

Mat bind_mat(const Call& c, BufferStore& s, int op, long rows, long cols, long ld) {
    if (ld < std::max(rows, 1L)) throw std::invalid_argument(c.kernel + ": ld < rows");
    return Mat{bind(c, s, op, mat_extent(rows, cols, ld)), ld};
}

Vec bind_vec(const Call& c, BufferStore& s, int op, long n, long inc) {
    return Vec{bind(c, s, op, vec_extent(n, inc)), n, inc};
}

double sym_at(const Mat& a, char uplo, long i, long j) {
    if (uplo == 'L') return i >= j ? a(i, j) : a(j, i);
    return i <= j ? a(i, j) : a(j, i);
}

// op(A)(i,j) for a triangular A with flags (uplo, trans, diag)
double tri_at(const Mat& a, char uplo, char trans, char diag, long i, long j) {
    long r = trans == 'N' ? i : j;
    long cdim = trans == 'N' ? j : i;
    bool in_tri = uplo == 'L' ? r >= cdim : r <= cdim;
    if (!in_tri) return 0.0;
    if (r == cdim && diag == 'U') return 1.0;
    return a(r, cdim);
}

void gemm_ref(char ta, char tb, long m, long n, long k, double alpha, const Mat& a, const Mat& b,
              double beta, const Mat& c) {
    for (long j = 0; j < n; ++j)
        for (long i = 0; i < m; ++i) {
            double acc = 0;
            for (long l = 0; l < k; ++l) {
                double av = ta == 'N' ? a(i, l) : a(l, i);
                double bv = tb == 'N' ? b(l, j) : b(j, l);
                acc += av * bv;
            }
            c(i, j) = alpha * acc + beta * c(i, j);
        }
}

// x := op(A)^-1 x for triangular A
void trsv_ref(char uplo, char trans, char diag, long n, const Mat& a, const Vec& x) {
    bool lower = (uplo == 'L') == (trans == 'N');
    if (lower) {
        for (long i = 0; i < n; ++i) {
            double acc = x(i);
            for (long j = 0; j < i; ++j) acc -= tri_at(a, uplo, trans, diag, i, j) * x(j);
            double d = diag == 'U' ? 1.0 : tri_at(a, uplo, trans, 'N', i, i);
            if (diag == 'N' && d == 0.0) throw std::domain_error("singular triangular matrix");
            x(i) = diag == 'U' ? acc : acc / d;
        }
    } else {
        for (long i = n - 1; i >= 0; --i) {
            double acc = x(i);
            for (long j = i + 1; j < n; ++j) acc -= tri_at(a, uplo, trans, diag, i, j) * x(j);
            double d = diag == 'U' ? 1.0 : tri_at(a, uplo, trans, 'N', i, i);
            if (diag == 'N' && d == 0.0) throw std::domain_error("singular triangular matrix");
            x(i) = diag == 'U' ? acc : acc / d;
        }
    }
}

void ex_dcopy(const Call& c, BufferStore& s) {
    long n = c.sizes[0];
    auto x = bind_vec(c, s, 0, n, c.incs[0]);
    auto y = bind_vec(c, s, 1, n, c.incs[1]);
    for (long i = 0; i < n; ++i) y(i) = x(i);
}

void ex_dswap(const Call& c, BufferStore& s) {
    long n = c.sizes[0];
    auto x = bind_vec(c, s, 0, n, c.incs[0]);
    auto y = bind_vec(c, s, 1, n, c.incs[1]);
    for (long i = 0; i < n; ++i) std::swap(x(i), y(i));
}

void ex_daxpy(const Call& c, BufferStore& s) {
    long n = c.sizes[0];
    double alpha = c.scalars[0];
    auto x = bind_vec(c, s, 0, n, c.incs[0]);
    auto y = bind_vec(c, s, 1, n, c.incs[1]);
    for (long i = 0; i < n; ++i) y(i) += alpha * x(i);
}

void ex_ddot(const Call& c, BufferStore& s) {
    long n = c.sizes[0];
    auto x = bind_vec(c, s, 0, n, c.incs[0]);
    auto y = bind_vec(c, s, 1, n, c.incs[1]);
    volatile double acc = 0;
    double t = 0;
    for (long i = 0; i < n; ++i) t += x(i) * y(i);
    acc = t;
    (void)acc;
}

void ex_dgemv(const Call& c, BufferStore& s) {
    char trans = c.flags[0];
    long m = c.sizes[0], n = c.sizes[1];
    double alpha = c.scalars[0], beta = c.scalars[1];
    auto a = bind_mat(c, s, 0, m, n, c.lds[0]);
    long xl = trans == 'N' ? n : m, yl = trans == 'N' ? m : n;
    auto x = bind_vec(c, s, 1, xl, c.incs[0]);
    auto y = bind_vec(c, s, 2, yl, c.incs[1]);
    for (long i = 0; i < yl; ++i) {
        double acc = 0;
        for (long j = 0; j < xl; ++j) acc += (trans == 'N' ? a(i, j) : a(j, i)) * x(j);
        y(i) = alpha * acc + beta * y(i);
    }
}

void ex_dger(const Call& c, BufferStore& s) {
    long m = c.sizes[0], n = c.sizes[1];
    double alpha = c.scalars[0];
    auto x = bind_vec(c, s, 0, m, c.incs[0]);
    auto y = bind_vec(c, s, 1, n, c.incs[1]);
    auto a = bind_mat(c, s, 2, m, n, c.lds[0]);
    for (long j = 0; j < n; ++j)
        for (long i = 0; i < m; ++i) a(i, j) += alpha * x(i) * y(j);
}

void ex_dtrsv(const Call& c, BufferStore& s) {
    long n = c.sizes[0];
    auto a = bind_mat(c, s, 0, n, n, c.lds[0]);
    auto x = bind_vec(c, s, 1, n, c.incs[0]);
    trsv_ref(c.flags[0], c.flags[1], c.flags[2], n, a, x);
}

void ex_dgemm(const Call& c, BufferStore& s) {
    char ta = c.flags[0], tb = c.flags[1];
    long m = c.sizes[0], n = c.sizes[1], k = c.sizes[2];
    double alpha = c.scalars[0], beta = c.scalars[1];
    auto a = bind_mat(c, s, 0, ta == 'N' ? m : k, ta == 'N' ? k : m, c.lds[0]);
    auto b = bind_mat(c, s, 1, tb == 'N' ? k : n, tb == 'N' ? n : k, c.lds[1]);
    auto cc = bind_mat(c, s, 2, m, n, c.lds[2]);
    gemm_ref(ta, tb, m, n, k, alpha, a, b, beta, cc);
}

void ex_dsymm(const Call& c, BufferStore& s) {
    char side = c.flags[0], uplo = c.flags[1];
    long m = c.sizes[0], n = c.sizes[1];
    double alpha = c.scalars[0], beta = c.scalars[1];
    long na = side == 'L' ? m : n;
    auto a = bind_mat(c, s, 0, na, na, c.lds[0]);
    auto b = bind_mat(c, s, 1, m, n, c.lds[1]);
    auto cc = bind_mat(c, s, 2, m, n, c.lds[2]);
    for (long j = 0; j < n; ++j)
        for (long i = 0; i < m; ++i) {
            double acc = 0;
            if (side == 'L')
                for (long l = 0; l < m; ++l) acc += sym_at(a, uplo, i, l) * b(l, j);
            else
                for (long l = 0; l < n; ++l) acc += b(i, l) * sym_at(a, uplo, l, j);
            cc(i, j) = alpha * acc + beta * cc(i, j);
        }
}

void ex_dtrmm(const Call& c, BufferStore& s) {
    char side = c.flags[0], uplo = c.flags[1], trans = c.flags[2], diag = c.flags[3];
    long m = c.sizes[0], n = c.sizes[1];
    double alpha = c.scalars[0];
    long na = side == 'L' ? m : n;
    auto a = bind_mat(c, s, 0, na, na, c.lds[0]);
    auto b = bind_mat(c, s, 1, m, n, c.lds[1]);
    std::vector<double> tmp((size_t)std::max(m * n, 1L));
    Mat t{tmp.data(), std::max(m, 1L)};
    for (long j = 0; j < n; ++j)
        for (long i = 0; i < m; ++i) {
            double acc = 0;
            if (side == 'L')
                for (long l = 0; l < m; ++l) acc += tri_at(a, uplo, trans, diag, i, l) * b(l, j);
            else
                for (long l = 0; l < n; ++l) acc += b(i, l) * tri_at(a, uplo, trans, diag, l, j);
            t(i, j) = alpha * acc;
        }
    for (long j = 0; j < n; ++j)
        for (long i = 0; i < m; ++i) b(i, j) = t(i, j);
}

void ex_dsyrk(const Call& c, BufferStore& s) {
    char uplo = c.flags[0], trans = c.flags[1];
    long n = c.sizes[0], k = c.sizes[1];
    double alpha = c.scalars[0], beta = c.scalars[1];
    auto a = bind_mat(c, s, 0, trans == 'N' ? n : k, trans == 'N' ? k : n, c.lds[0]);
    auto cc = bind_mat(c, s, 1, n, n, c.lds[1]);
    for (long j = 0; j < n; ++j)
        for (long i = 0; i < n; ++i) {
            if (uplo == 'L' ? i < j : i > j) continue;
            double acc = 0;
            for (long l = 0; l < k; ++l) {
                double ail = trans == 'N' ? a(i, l) : a(l, i);
                double ajl = trans == 'N' ? a(j, l) : a(l, j);
                acc += ail * ajl;
            }
            cc(i, j) = alpha * acc + beta * cc(i, j);
        }
}

void ex_dsyr2k(const Call& c, BufferStore& s) {
    char uplo = c.flags[0], trans = c.flags[1];
    long n = c.sizes[0], k = c.sizes[1];
    double alpha = c.scalars[0], beta = c.scalars[1];
    auto a = bind_mat(c, s, 0, trans == 'N' ? n : k, trans == 'N' ? k : n, c.lds[0]);
    auto b = bind_mat(c, s, 1, trans == 'N' ? n : k, trans == 'N' ? k : n, c.lds[1]);
    auto cc = bind_mat(c, s, 2, n, n, c.lds[2]);
    for (long j = 0; j < n; ++j)
        for (long i = 0; i < n; ++i) {
            if (uplo == 'L' ? i < j : i > j) continue;
            double acc = 0;
            for (long l = 0; l < k; ++l) {
                double ail = trans == 'N' ? a(i, l) : a(l, i);
                double ajl = trans == 'N' ? a(j, l) : a(l, j);
                double bil = trans == 'N' ? b(i, l) : b(l, i);
                double bjl = trans == 'N' ? b(j, l) : b(l, j);
                acc += ail * bjl + bil * ajl;
            }
            cc(i, j) = alpha * acc + beta * cc(i, j);
        }
}

void ex_dtrsm(const Call& c, BufferStore& s) {
    char side = c.flags[0], uplo = c.flags[1], trans = c.flags[2], diag = c.flags[3];
    long m = c.sizes[0], n = c.sizes[1];
    double alpha = c.scalars[0];
    long na = side == 'L' ? m : n;
    auto a = bind_mat(c, s, 0, na, na, c.lds[0]);
    auto b = bind_mat(c, s, 1, m, n, c.lds[1]);
    if (alpha != 1.0)
        for (long j = 0; j < n; ++j)
            for (long i = 0; i < m; ++i) b(i, j) *= alpha;
    if (side == 'L') {
        for (long j = 0; j < n; ++j) {
            Vec col{&b(0, j), m, 1};
            trsv_ref(uplo, trans, diag, m, a, col);
        }
    } else {
        // solve X op(A) = B row-wise: op(A)' x' = b'
        char t2 = trans == 'N' ? 'T' : 'N';
        for (long i = 0; i < m; ++i) {
            Vec row{&b(i, 0), n, b.ld};
            trsv_ref(uplo, t2, diag, n, a, row);
        }
    }
}

void ex_dlauu2(const Call& c, BufferStore& s) {
    char uplo = c.flags[0];
    long n = c.sizes[0];
    auto a = bind_mat(c, s, 0, n, n, c.lds[0]);
    std::vector<double> tmp((size_t)std::max(n * n, 1L), 0.0);
    Mat t{tmp.data(), std::max(n, 1L)};
    if (uplo == 'L') {
        // A := L' L, lower triangle of the result
        for (long j = 0; j < n; ++j)
            for (long i = j; i < n; ++i) {
                double acc = 0;
                for (long k = i; k < n; ++k) acc += a(k, i) * a(k, j);
                t(i, j) = acc;
            }
        for (long j = 0; j < n; ++j)
            for (long i = j; i < n; ++i) a(i, j) = t(i, j);
    } else {
        // A := U U', upper triangle of the result
        for (long j = 0; j < n; ++j)
            for (long i = 0; i <= j; ++i) {
                double acc = 0;
                for (long k = j; k < n; ++k) acc += a(i, k) * a(j, k);
                t(i, j) = acc;
            }
        for (long j = 0; j < n; ++j)
            for (long i = 0; i <= j; ++i) a(i, j) = t(i, j);
    }
}

void ex_dpotf2(const Call& c, BufferStore& s) {
    char uplo = c.flags[0];
    long n = c.sizes[0];
    auto a = bind_mat(c, s, 0, n, n, c.lds[0]);
    if (uplo == 'L') {
        for (long j = 0; j < n; ++j) {
            double d = a(j, j);
            for (long k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
            if (d <= 0) throw std::domain_error("dpotf2: matrix not positive definite");
            d = std::sqrt(d);
            a(j, j) = d;
            for (long i = j + 1; i < n; ++i) {
                double acc = a(i, j);
                for (long k = 0; k < j; ++k) acc -= a(i, k) * a(j, k);
                a(i, j) = acc / d;
            }
        }
    } else {
        for (long j = 0; j < n; ++j) {
            double d = a(j, j);
            for (long k = 0; k < j; ++k) d -= a(k, j) * a(k, j);
            if (d <= 0) throw std::domain_error("dpotf2: matrix not positive definite");
            d = std::sqrt(d);
            a(j, j) = d;
            for (long i = j + 1; i < n; ++i) {
                double acc = a(j, i);
                for (long k = 0; k < j; ++k) acc -= a(k, j) * a(k, i);
                a(j, i) = acc / d;
            }
        }
    }
}

void ex_dsygs2(const Call& c, BufferStore& s) {
    char itype = c.flags[0], uplo = c.flags[1];
    long n = c.sizes[0];
    auto a = bind_mat(c, s, 0, n, n, c.lds[0]);
    auto bm = bind_mat(c, s, 1, n, n, c.lds[1]);
    if (n == 0) return;
    // full symmetric copy of A
    std::vector<double> fa((size_t)n * n);
    Mat f{fa.data(), n};
    for (long j = 0; j < n; ++j)
        for (long i = 0; i < n; ++i) f(i, j) = sym_at(a, uplo, i, j);
    auto tsolve = [&](char tuplo, char ttrans, Vec col) { trsv_ref(tuplo, ttrans, 'N', n, bm, col); };
    auto tmul = [&](char tuplo, char ttrans, Vec col) {
        std::vector<double> r((size_t)n);
        for (long i = 0; i < n; ++i) {
            double acc = 0;
            for (long j2 = 0; j2 < n; ++j2) acc += tri_at(bm, tuplo, ttrans, 'N', i, j2) * col(j2);
            r[(size_t)i] = acc;
        }
        for (long i = 0; i < n; ++i) col(i) = r[(size_t)i];
    };
    bool lower = uplo == 'L';
    if (itype == '1') {
        // A := inv(L) A inv(L') or inv(U') A inv(U)
        for (long j = 0; j < n; ++j) tsolve(uplo, lower ? 'N' : 'T', Vec{&f(0, j), n, 1});
        for (long i = 0; i < n; ++i) tsolve(uplo, lower ? 'N' : 'T', Vec{&f(i, 0), n, f.ld});
    } else {
        // A := L' A L or U A U'
        for (long j = 0; j < n; ++j) tmul(uplo, lower ? 'T' : 'N', Vec{&f(0, j), n, 1});
        for (long i = 0; i < n; ++i) tmul(uplo, lower ? 'T' : 'N', Vec{&f(i, 0), n, f.ld});
    }
    for (long j = 0; j < n; ++j)
        for (long i = 0; i < n; ++i)
            if (lower ? i >= j : i <= j) a(i, j) = f(i, j);
}

void ex_dtrti2(const Call& c, BufferStore& s) {
    char uplo = c.flags[0], diag = c.flags[1];
    long n = c.sizes[0];
    auto a = bind_mat(c, s, 0, n, n, c.lds[0]);
    if (n == 0) return;
    // X := inv(A) by solving A X = I column by column
    std::vector<double> x((size_t)n * n, 0.0);
    Mat xm{x.data(), n};
    for (long j = 0; j < n; ++j) {
        xm(j, j) = 1.0;
        Vec col{&xm(0, j), n, 1};
        trsv_ref(uplo, 'N', diag, n, a, col);
    }
    for (long j = 0; j < n; ++j)
        for (long i = 0; i < n; ++i) {
            bool in_tri = uplo == 'L' ? i >= j : i <= j;
            if (in_tri && !(diag == 'U' && i == j)) a(i, j) = xm(i, j);
        }
}

void ex_dgetf2(const Call& c, BufferStore& s) {
    long m = c.sizes[0], n = c.sizes[1];
    auto a = bind_mat(c, s, 0, m, n, c.lds[0]);
    int* ipiv = s.get_int(c.operands[1].buffer);
    long mn = std::min(m, n);
    for (long j = 0; j < mn; ++j) {
        long p = j;
        for (long i = j + 1; i < m; ++i)
            if (std::fabs(a(i, j)) > std::fabs(a(p, j))) p = i;
        ipiv[c.operands[1].offset + j] = (int)(p + 1);
        if (a(p, j) == 0.0) throw std::domain_error("dgetf2: singular matrix");
        if (p != j)
            for (long k = 0; k < n; ++k) std::swap(a(j, k), a(p, k));
        for (long i = j + 1; i < m; ++i) {
            a(i, j) /= a(j, j);
            for (long k = j + 1; k < n; ++k) a(i, k) -= a(i, j) * a(j, k);
        }
    }
}

void ex_dgeqr2(const Call& c, BufferStore& s) {
    long m = c.sizes[0], n = c.sizes[1];
    auto a = bind_mat(c, s, 0, m, n, c.lds[0]);
    long mn = std::min(m, n);
    double* tau = bind(c, s, 1, mn);
    for (long j = 0; j < mn; ++j) {
        // Householder vector for A(j:m, j)
        double alpha = a(j, j);
        double xnorm = 0;
        for (long i = j + 1; i < m; ++i) xnorm += a(i, j) * a(i, j);
        if (xnorm == 0.0) {
            tau[j] = 0.0;
            continue;
        }
        double beta = -std::copysign(std::sqrt(alpha * alpha + xnorm), alpha);
        tau[j] = (beta - alpha) / beta;
        double scale = 1.0 / (alpha - beta);
        for (long i = j + 1; i < m; ++i) a(i, j) *= scale;
        a(j, j) = beta;
        // apply H = I - tau v v' to trailing columns (v(0) = 1 implicit)
        for (long k = j + 1; k < n; ++k) {
            double w = a(j, k);
            for (long i = j + 1; i < m; ++i) w += a(i, j) * a(i, k);
            w *= tau[j];
            a(j, k) -= w;
            for (long i = j + 1; i < m; ++i) a(i, k) -= a(i, j) * w;
        }
    }
}

void ex_dlarft(const Call& c, BufferStore& s) {
    char direct = c.flags[0], storev = c.flags[1];
    if (direct != 'F' || storev != 'C')
        throw std::invalid_argument("dlarft: only direct=F, storev=C supported");
    long n = c.sizes[0], k = c.sizes[1];
    auto v = bind_mat(c, s, 0, n, k, c.lds[0]);
    double* tau = bind(c, s, 1, k);
    auto t = bind_mat(c, s, 2, k, k, c.lds[1]);
    auto vat = [&](long i, long j) -> double {
        if (i < j) return 0.0;
        if (i == j) return 1.0;
        return v(i, j);
    };
    for (long i = 0; i < k; ++i) {
        t(i, i) = tau[i];
        // T(0:i, i) = -tau_i * T(0:i, 0:i) * (V' v_i)
        std::vector<double> w((size_t)std::max(i, 1L), 0.0);
        for (long j = 0; j < i; ++j) {
            double acc = 0;
            for (long r = 0; r < n; ++r) acc += vat(r, j) * vat(r, i);
            w[(size_t)j] = acc;
        }
        for (long j = 0; j < i; ++j) {
            double acc = 0;
            for (long l = j; l < i; ++l) acc += t(j, l) * w[(size_t)l];
            t(j, i) = -tau[i] * acc;
        }
    }
}

void ex_dlarfb(const Call& c, BufferStore& s) {
    char side = c.flags[0], trans = c.flags[1], direct = c.flags[2], storev = c.flags[3];
    if (direct != 'F' || storev != 'C')
        throw std::invalid_argument("dlarfb: only direct=F, storev=C supported");
    long m = c.sizes[0], n = c.sizes[1], k = c.sizes[2];
    long vrows = side == 'L' ? m : n;
    auto v = bind_mat(c, s, 0, vrows, k, c.lds[0]);
    auto t = bind_mat(c, s, 1, k, k, c.lds[1]);
    auto cm = bind_mat(c, s, 2, m, n, c.lds[2]);
    auto vat = [&](long i, long j) -> double {
        if (i < j) return 0.0;
        if (i == j) return 1.0;
        return v(i, j);
    };
    auto top = [&](long i, long j) { return trans == 'N' ? t(i, j) : t(j, i); };
    if (side == 'L') {
        // C := C - V op(T) V' C
        std::vector<double> w((size_t)std::max(k * n, 1L), 0.0);
        Mat wm{w.data(), std::max(k, 1L)};
        for (long j = 0; j < n; ++j)
            for (long l = 0; l < k; ++l) {
                double acc = 0;
                for (long i = 0; i < m; ++i) acc += vat(i, l) * cm(i, j);
                wm(l, j) = acc;
            }
        std::vector<double> w2((size_t)std::max(k * n, 1L), 0.0);
        Mat w2m{w2.data(), std::max(k, 1L)};
        for (long j = 0; j < n; ++j)
            for (long l = 0; l < k; ++l) {
                double acc = 0;
                for (long r = 0; r < k; ++r) acc += top(l, r) * wm(r, j);
                w2m(l, j) = acc;
            }
        for (long j = 0; j < n; ++j)
            for (long i = 0; i < m; ++i) {
                double acc = 0;
                for (long l = 0; l < k; ++l) acc += vat(i, l) * w2m(l, j);
                cm(i, j) -= acc;
            }
    } else {
        // C := C - C V op(T) V'
        std::vector<double> w((size_t)std::max(m * k, 1L), 0.0);
        Mat wm{w.data(), std::max(m, 1L)};
        for (long l = 0; l < k; ++l)
            for (long i = 0; i < m; ++i) {
                double acc = 0;
                for (long j = 0; j < n; ++j) acc += cm(i, j) * vat(j, l);
                wm(i, l) = acc;
            }
        std::vector<double> w2((size_t)std::max(m * k, 1L), 0.0);
        Mat w2m{w2.data(), std::max(m, 1L)};
        for (long l = 0; l < k; ++l)
            for (long i = 0; i < m; ++i) {
                double acc = 0;
                for (long r = 0; r < k; ++r) acc += wm(i, r) * top(r, l);
                w2m(i, l) = acc;
            }
        for (long j = 0; j < n; ++j)
            for (long i = 0; i < m; ++i) {
                double acc = 0;
                for (long l = 0; l < k; ++l) acc += w2m(i, l) * vat(j, l);
                cm(i, j) -= acc;
            }
    }
}

void ex_dlaswp(const Call& c, BufferStore& s) {
    long n = c.sizes[0], k1 = c.sizes[1], k2 = c.sizes[2];
    auto a = bind_mat(c, s, 0, k2, n, c.lds[0]);
    const int* ipiv = s.get_int(c.operands[1].buffer);
    long off = c.operands[1].offset;
    if (c.incs[0] != 1) throw std::invalid_argument("dlaswp: only incx=1 supported");
    for (long i = k1; i <= k2; ++i) {
        long p = ipiv[off + i - 1];  // 1-based
        if (p != i)
            for (long j = 0; j < n; ++j) std::swap(a(i - 1, j), a(p - 1, j));
    }
}

void ex_dtrsyl(const Call& c, BufferStore& s) {
    char ta = c.flags[0], tb = c.flags[1];
    if (ta != 'N' || tb != 'N') throw std::invalid_argument("dtrsyl: only tranA=tranB=N supported");
    double isgn = c.scalars[0];
    long m = c.sizes[0], n = c.sizes[1];
    auto a = bind_mat(c, s, 0, m, m, c.lds[0]);
    auto b = bind_mat(c, s, 1, n, n, c.lds[1]);
    auto cm = bind_mat(c, s, 2, m, n, c.lds[2]);
    double* scale = bind(c, s, 3, 1);
    scale[0] = 1.0;
    // A X + isgn X B = C with upper-triangular A, B; solve column by column
    for (long j = 0; j < n; ++j) {
        for (long i = 0; i < m; ++i) {
            double acc = cm(i, j);
            for (long l = 0; l < j; ++l) acc -= isgn * cm(i, l) * b(l, j);
            cm(i, j) = acc;
        }
        // (A + isgn b_jj I) x = rhs, back substitution
        double shift = isgn * b(j, j);
        for (long i = m - 1; i >= 0; --i) {
            double acc = cm(i, j);
            for (long l = i + 1; l < m; ++l) acc -= a(i, l) * cm(l, j);
            double d = a(i, i) + shift;
            if (d == 0.0) throw std::domain_error("dtrsyl: singular Sylvester operator");
            cm(i, j) = acc / d;
        }
    }
}

}  // namespace

void execute(const Call& call, BufferStore& store) {
    if (call.pseudo) throw std::invalid_argument("cannot execute pseudo call: " + call.note);
    const auto& k = kernel(call.kernel);
    k.validate(call);
    // size-zero calls perform no work and leave all buffers untouched
    if (call.zero_extent()) return;

    if (call.kernel == "dcopy") return ex_dcopy(call, store);
    if (call.kernel == "dswap") return ex_dswap(call, store);
    if (call.kernel == "daxpy") return ex_daxpy(call, store);
    if (call.kernel == "ddot") return ex_ddot(call, store);
    if (call.kernel == "dgemv") return ex_dgemv(call, store);
    if (call.kernel == "dger") return ex_dger(call, store);
    if (call.kernel == "dtrsv") return ex_dtrsv(call, store);
    if (call.kernel == "dgemm") return ex_dgemm(call, store);
    if (call.kernel == "dsymm") return ex_dsymm(call, store);
    if (call.kernel == "dtrmm") return ex_dtrmm(call, store);
    if (call.kernel == "dsyrk") return ex_dsyrk(call, store);
    if (call.kernel == "dsyr2k") return ex_dsyr2k(call, store);
    if (call.kernel == "dtrsm") return ex_dtrsm(call, store);
    if (call.kernel == "dlauu2") return ex_dlauu2(call, store);
    if (call.kernel == "dpotf2") return ex_dpotf2(call, store);
    if (call.kernel == "dsygs2") return ex_dsygs2(call, store);
    if (call.kernel == "dtrti2") return ex_dtrti2(call, store);
    if (call.kernel == "dgetf2") return ex_dgetf2(call, store);
    if (call.kernel == "dgeqr2") return ex_dgeqr2(call, store);
    if (call.kernel == "dlarft") return ex_dlarft(call, store);
    if (call.kernel == "dlarfb") return ex_dlarfb(call, store);
    if (call.kernel == "dlaswp") return ex_dlaswp(call, store);
    if (call.kernel == "dtrsyl") return ex_dtrsyl(call, store);
    throw std::invalid_argument("no reference implementation for " + call.kernel);
}

}  // namespace dlap
