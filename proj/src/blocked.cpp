#include "dlap/blocked.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dlap {

namespace {

// block operand of the n x n matrix in buffer `buf` with ld = n
Operand at(const std::string& buf, long ld, long row, long col, const std::string& block) {
    return Operand{buf, row + col * ld, block};
}

struct Emit {
    std::vector<Call>& out;
    long ld;  // problem leading dimension

    void trsm(char side, char uplo, char trans, char diag, long m, long n, double alpha,
              Operand a, Operand b) {
        out.push_back(make_call("dtrsm", {side, uplo, trans, diag}, {m, n}, {alpha}, {a, b}, {ld, ld}));
    }
    void trmm(char side, char uplo, char trans, char diag, long m, long n, double alpha,
              Operand a, Operand b) {
        out.push_back(make_call("dtrmm", {side, uplo, trans, diag}, {m, n}, {alpha}, {a, b}, {ld, ld}));
    }
    void gemm(char ta, char tb, long m, long n, long k, double alpha, Operand a, Operand b,
              double beta, Operand c) {
        out.push_back(make_call("dgemm", {ta, tb}, {m, n, k}, {alpha, beta}, {a, b, c}, {ld, ld, ld}));
    }
    void symm(char side, char uplo, long m, long n, double alpha, Operand a, Operand b, double beta,
              Operand c) {
        out.push_back(make_call("dsymm", {side, uplo}, {m, n}, {alpha, beta}, {a, b, c}, {ld, ld, ld}));
    }
    void syrk(char uplo, char trans, long n, long k, double alpha, Operand a, double beta, Operand c) {
        out.push_back(make_call("dsyrk", {uplo, trans}, {n, k}, {alpha, beta}, {a, c}, {ld, ld}));
    }
    void syr2k(char uplo, char trans, long n, long k, double alpha, Operand a, Operand b, double beta,
               Operand c) {
        out.push_back(make_call("dsyr2k", {uplo, trans}, {n, k}, {alpha, beta}, {a, b, c}, {ld, ld, ld}));
    }
    void potf2(long n, Operand a) {
        out.push_back(make_call("dpotf2", {'L'}, {n}, {}, {a}, {ld}));
    }
    void trti2(long n, Operand a) {
        out.push_back(make_call("dtrti2", {'L', 'N'}, {n}, {}, {a}, {ld}));
    }
    void lauu2(long n, Operand a) {
        out.push_back(make_call("dlauu2", {'L'}, {n}, {}, {a}, {ld}));
    }
    void sygs2(long n, Operand a, Operand b) {
        out.push_back(make_call("dsygs2", {'1', 'L'}, {n}, {}, {a, b}, {ld, ld}));
    }
};

// SE traversal geometry: processed p, current block w = q - p, trailing r
struct Step {
    long p, w, r;
};

std::vector<Step> steps_se(long n, long b) {
    std::vector<Step> s;
    for (long p = 0; p < n;) {
        long q = std::min(p + b, n);
        s.push_back({p, q - p, n - q});
        p = q;
    }
    return s;
}

// ---- Cholesky family ----

std::vector<Call> chol1(long n, long b) {
    std::vector<Call> out;
    Emit e{out, n};
    for (auto [p, w, r] : steps_se(n, b)) {
        e.trsm('R', 'L', 'T', 'N', w, p, 1.0, at("A", n, 0, 0, "A00"), at("A", n, p, 0, "A10"));
        e.syrk('L', 'N', w, p, -1.0, at("A", n, p, 0, "A10"), 1.0, at("A", n, p, p, "A11"));
        e.potf2(w, at("A", n, p, p, "A11"));
    }
    return out;
}

std::vector<Call> chol2(long n, long b) {
    std::vector<Call> out;
    Emit e{out, n};
    for (auto [p, w, r] : steps_se(n, b)) {
        long q = p + w;
        e.syrk('L', 'N', w, p, -1.0, at("A", n, p, 0, "A10"), 1.0, at("A", n, p, p, "A11"));
        e.potf2(w, at("A", n, p, p, "A11"));
        e.gemm('N', 'T', r, w, p, -1.0, at("A", n, q, 0, "A20"), at("A", n, p, 0, "A10"), 1.0,
               at("A", n, q, p, "A21"));
        e.trsm('R', 'L', 'T', 'N', r, w, 1.0, at("A", n, p, p, "A11"), at("A", n, q, p, "A21"));
    }
    return out;
}

std::vector<Call> chol3(long n, long b) {
    std::vector<Call> out;
    Emit e{out, n};
    for (auto [p, w, r] : steps_se(n, b)) {
        long q = p + w;
        e.potf2(w, at("A", n, p, p, "A11"));
        e.trsm('R', 'L', 'T', 'N', r, w, 1.0, at("A", n, p, p, "A11"), at("A", n, q, p, "A21"));
        e.syrk('L', 'N', r, w, -1.0, at("A", n, q, p, "A21"), 1.0, at("A", n, q, q, "A22"));
    }
    return out;
}

// ---- triangular inversion, algorithms 1-4 traverse SE ----

std::vector<Call> trinv_se(long n, long b, int variant) {
    std::vector<Call> out;
    Emit e{out, n};
    for (auto [p, w, r] : steps_se(n, b)) {
        long q = p + w;
        Operand A00 = at("A", n, 0, 0, "A00"), A10 = at("A", n, p, 0, "A10");
        Operand A11 = at("A", n, p, p, "A11"), A20 = at("A", n, q, 0, "A20");
        Operand A21 = at("A", n, q, p, "A21"), A22 = at("A", n, q, q, "A22");
        switch (variant) {
            case 1:
                e.trmm('R', 'L', 'N', 'N', w, p, 1.0, A00, A10);
                e.trsm('L', 'L', 'N', 'N', w, p, -1.0, A11, A10);
                e.trti2(w, A11);
                break;
            case 2:
                e.trsm('L', 'L', 'N', 'N', r, w, 1.0, A22, A21);
                e.trsm('R', 'L', 'N', 'N', r, w, -1.0, A11, A21);
                e.trti2(w, A11);
                break;
            case 3:
                e.trsm('R', 'L', 'N', 'N', r, w, -1.0, A11, A21);
                e.gemm('N', 'N', r, p, w, 1.0, A21, A10, 1.0, A20);
                e.trsm('L', 'L', 'N', 'N', w, p, 1.0, A11, A10);
                e.trti2(w, A11);
                break;
            case 4:
                e.trsm('L', 'L', 'N', 'N', r, w, -1.0, A22, A21);
                e.gemm('N', 'N', r, p, w, -1.0, A21, A10, 1.0, A20);
                e.trmm('R', 'L', 'N', 'N', w, p, 1.0, A00, A10);
                e.trti2(w, A11);
                break;
        }
    }
    return out;
}

// algorithms 5-8 are the mirrors with NW traversal: processed extent p grows
// from the bottom-right corner, remainder r = n - p - w is top-left
std::vector<Call> trinv_nw(long n, long b, int variant) {
    std::vector<Call> out;
    Emit e{out, n};
    for (auto [p, w, r] : steps_se(n, b)) {
        Operand A00 = at("A", n, 0, 0, "A00"), A10 = at("A", n, r, 0, "A10");
        Operand A11 = at("A", n, r, r, "A11"), A20 = at("A", n, r + w, 0, "A20");
        Operand A21 = at("A", n, r + w, r, "A21"), A22 = at("A", n, r + w, r + w, "A22");
        switch (variant) {
            case 5:
                e.trmm('L', 'L', 'N', 'N', p, w, 1.0, A22, A21);
                e.trsm('R', 'L', 'N', 'N', p, w, -1.0, A11, A21);
                e.trti2(w, A11);
                break;
            case 6:
                e.trsm('R', 'L', 'N', 'N', w, r, 1.0, A00, A10);
                e.trsm('L', 'L', 'N', 'N', w, r, -1.0, A11, A10);
                e.trti2(w, A11);
                break;
            case 7:
                e.trsm('L', 'L', 'N', 'N', w, r, -1.0, A11, A10);
                e.gemm('N', 'N', p, r, w, 1.0, A21, A10, 1.0, A20);
                e.trsm('R', 'L', 'N', 'N', p, w, 1.0, A11, A21);
                e.trti2(w, A11);
                break;
            case 8:
                e.trsm('R', 'L', 'N', 'N', w, r, -1.0, A00, A10);
                e.gemm('N', 'N', p, r, w, -1.0, A21, A10, 1.0, A20);
                e.trmm('L', 'L', 'N', 'N', p, w, 1.0, A22, A21);
                e.trti2(w, A11);
                break;
        }
    }
    return out;
}

// ---- remaining LAPACK algorithms ----

std::vector<Call> lauum_blocked(long n, long b) {
    std::vector<Call> out;
    Emit e{out, n};
    for (auto [p, w, r] : steps_se(n, b)) {
        long q = p + w;
        e.trmm('L', 'L', 'T', 'N', w, p, 1.0, at("A", n, p, p, "A11"), at("A", n, p, 0, "A10"));
        e.lauu2(w, at("A", n, p, p, "A11"));
        e.gemm('T', 'N', w, p, r, 1.0, at("A", n, q, p, "A21"), at("A", n, q, 0, "A20"), 1.0,
               at("A", n, p, 0, "A10"));
        e.syrk('L', 'T', w, r, 1.0, at("A", n, q, p, "A21"), 1.0, at("A", n, p, p, "A11"));
    }
    return out;
}

std::vector<Call> sygst_blocked(long n, long b) {
    std::vector<Call> out;
    Emit e{out, n};
    for (auto [p, w, r] : steps_se(n, b)) {
        long q = p + w;
        Operand A11 = at("A", n, p, p, "A11"), A21 = at("A", n, q, p, "A21"),
                A22 = at("A", n, q, q, "A22");
        Operand L11 = at("L", n, p, p, "L11"), L21 = at("L", n, q, p, "L21"),
                L22 = at("L", n, q, q, "L22");
        e.sygs2(w, A11, L11);
        e.trsm('R', 'L', 'T', 'N', r, w, 1.0, L11, A21);
        e.symm('R', 'L', r, w, -0.5, A11, L21, 1.0, A21);
        e.syr2k('L', 'N', r, w, -1.0, A21, L21, 1.0, A22);
        e.symm('R', 'L', r, w, -0.5, A11, L21, 1.0, A21);
        e.trsm('L', 'L', 'N', 'N', r, w, 1.0, L22, A21);
    }
    return out;
}

std::vector<Call> getrf_blocked(long m, long n, long b) {
    std::vector<Call> out;
    Emit e{out, m};
    long mn = std::min(m, n);
    for (auto [p, w, r0] : steps_se(mn, b)) {
        long q = p + w;
        long rows = m - p;       // panel height
        long rcols = n - q;      // trailing columns
        out.push_back(make_call("dgetf2", {}, {rows, w}, {},
                                {at("A", m, p, p, "panel"), Operand{"ipiv", p, "ipiv"}}, {m}));
        out.push_back(make_call("dlaswp", {}, {p, 1, w}, {},
                                {at("A", m, p, 0, "left"), Operand{"ipiv", p, "ipiv"}}, {m}, {1}));
        out.push_back(make_call("dlaswp", {}, {rcols, 1, w}, {},
                                {at("A", m, p, q, "right"), Operand{"ipiv", p, "ipiv"}}, {m}, {1}));
        e.trsm('L', 'L', 'N', 'U', w, rcols, 1.0, at("A", m, p, p, "A11"), at("A", m, p, q, "A12"));
        e.gemm('N', 'N', m - q, rcols, w, -1.0, at("A", m, q, p, "A21"), at("A", m, p, q, "A12"), 1.0,
               at("A", m, q, q, "A22"));
    }
    return out;
}

std::vector<Call> geqrf_blocked(long m, long n, long b) {
    std::vector<Call> out;
    Emit e{out, m};
    long mn = std::min(m, n);
    for (auto [p, w, r0] : steps_se(mn, b)) {
        long q = p + w;
        long rows = m - p;   // panel height
        long r = n - q;      // trailing columns
        out.push_back(make_call("dgeqr2", {}, {rows, w}, {},
                                {at("A", m, p, p, "panel"), Operand{"tau", p, "tau"},
                                 Operand{"W", 0, "work"}},
                                {m}));
        if (r == 0) continue;
        out.push_back(make_call("dlarft", {'F', 'C'}, {rows, w}, {},
                                {at("A", m, p, p, "V"), Operand{"tau", p, "tau"},
                                 at("W", m, 0, 0, "W1")},
                                {m, m}));
        // dlarfb expansion: W2 := A12', 3 dtrmm, 2 dgemm, inline subtraction
        for (long j = 0; j < w; ++j)
            out.push_back(make_call("dcopy", {}, {r}, {},
                                    {at("A", m, p + j, q, "A12"), at("W", m, w, j, "W2")}, {},
                                    {m, 1}));
        e.trmm('R', 'L', 'N', 'U', r, w, 1.0, at("A", m, p, p, "A11"), at("W", m, w, 0, "W2"));
        e.gemm('T', 'N', r, w, m - q, 1.0, at("A", m, q, q, "A22"), at("A", m, q, p, "A21"), 1.0,
               at("W", m, w, 0, "W2"));
        e.trmm('R', 'U', 'N', 'N', r, w, 1.0, at("W", m, 0, 0, "W1"), at("W", m, w, 0, "W2"));
        e.gemm('N', 'T', m - q, r, w, -1.0, at("A", m, q, p, "A21"), at("W", m, w, 0, "W2"), 1.0,
               at("A", m, q, q, "A22"));
        e.trmm('R', 'L', 'T', 'U', r, w, 1.0, at("A", m, p, p, "A11"), at("W", m, w, 0, "W2"));
        Call inline_sub;
        inline_sub.kernel = "inline";
        inline_sub.pseudo = true;
        inline_sub.note = "A12 := A12 - W2'";
        inline_sub.sizes = {w, r};
        inline_sub.operands = {at("A", m, p, q, "A12"), at("W", m, w, 0, "W2")};
        inline_sub.lds = {m, m};
        out.push_back(std::move(inline_sub));
    }
    return out;
}

// ---- triangular Sylvester equation ----
// C is m x n (ld m), A upper m x m, B upper n x n; X overwrites C.

struct SylvCtx {
    std::vector<Call>& out;
    long m, n;
};

void sylv_kernel(SylvCtx& cx, long row0, long wm, long col0, long wn) {
    cx.out.push_back(make_call(
        "dtrsyl", {'N', 'N'}, {wm, wn}, {1.0},
        {Operand{"A", row0 + row0 * cx.m, "A11"}, Operand{"B", col0 + col0 * cx.n, "B11"},
         Operand{"C", row0 + col0 * cx.m, "C11"}, Operand{"sylscale", 0, "scale"}},
        {cx.m, cx.n, cx.m}));
}

// n-layer: traverse columns [col0, col0+nn) left to right; A-block fixed
void sylv_expand_n(SylvCtx& cx, int variant, long row0, long wm, long col0, long nn, long b) {
    for (auto [p, w, r] : steps_se(nn, b)) {
        long q = p + w;
        auto gemm_left = [&]() {
            cx.out.push_back(make_call("dgemm", {'N', 'N'}, {wm, w, p}, {-1.0, 1.0},
                                       {Operand{"C", row0 + col0 * cx.m, "C0"},
                                        Operand{"B", col0 + (col0 + p) * cx.n, "B01"},
                                        Operand{"C", row0 + (col0 + p) * cx.m, "C1"}},
                                       {cx.m, cx.n, cx.m}));
        };
        auto gemm_right = [&]() {
            cx.out.push_back(make_call("dgemm", {'N', 'N'}, {wm, r, w}, {-1.0, 1.0},
                                       {Operand{"C", row0 + (col0 + p) * cx.m, "C1"},
                                        Operand{"B", (col0 + p) + (col0 + q) * cx.n, "B12"},
                                        Operand{"C", row0 + (col0 + q) * cx.m, "C2"}},
                                       {cx.m, cx.n, cx.m}));
        };
        if (variant == 1) {
            gemm_left();
            sylv_kernel(cx, row0, wm, col0 + p, w);
        } else {
            sylv_kernel(cx, row0, wm, col0 + p, w);
            gemm_right();
        }
    }
}

// m-layer: traverse rows [row0, row0+mm) bottom to top; B-block fixed;
// sub-problems expanded with the n-layer variant
void sylv_expand_m(SylvCtx& cx, int variant, int nvariant, long row0, long mm, long col0, long nn,
                   long b, bool sub_is_kernel) {
    for (auto [p, w, r] : steps_se(mm, b)) {
        long top = row0 + r;  // current block's first row
        auto gemm_below = [&]() {
            cx.out.push_back(make_call("dgemm", {'N', 'N'}, {w, nn, p}, {-1.0, 1.0},
                                       {Operand{"A", top + (top + w) * cx.m, "A12"},
                                        Operand{"C", (top + w) + col0 * cx.m, "C2"},
                                        Operand{"C", top + col0 * cx.m, "C1"}},
                                       {cx.m, cx.m, cx.m}));
        };
        auto gemm_above = [&]() {
            cx.out.push_back(make_call("dgemm", {'N', 'N'}, {r, nn, w}, {-1.0, 1.0},
                                       {Operand{"A", row0 + top * cx.m, "A01"},
                                        Operand{"C", top + col0 * cx.m, "C1"},
                                        Operand{"C", row0 + col0 * cx.m, "C0"}},
                                       {cx.m, cx.m, cx.m}));
        };
        auto sub = [&]() {
            if (sub_is_kernel)
                sylv_kernel(cx, top, w, col0, nn);
            else
                sylv_expand_n(cx, nvariant, top, w, col0, nn, b);
        };
        if (variant == 1) {
            gemm_below();
            sub();
        } else {
            sub();
            gemm_above();
        }
    }
}

// n-outer composition: the n-layer's sub-problems are m-panels
void sylv_expand_n_outer(SylvCtx& cx, int nvariant, int mvariant, long m, long n, long b) {
    for (auto [p, w, r] : steps_se(n, b)) {
        long q = p + w;
        auto gemm_left = [&]() {
            cx.out.push_back(make_call("dgemm", {'N', 'N'}, {m, w, p}, {-1.0, 1.0},
                                       {Operand{"C", 0, "C0"}, Operand{"B", p * cx.n, "B01"},
                                        Operand{"C", p * cx.m, "C1"}},
                                       {cx.m, cx.n, cx.m}));
        };
        auto gemm_right = [&]() {
            cx.out.push_back(make_call("dgemm", {'N', 'N'}, {m, r, w}, {-1.0, 1.0},
                                       {Operand{"C", p * cx.m, "C1"}, Operand{"B", p + q * cx.n, "B12"},
                                        Operand{"C", q * cx.m, "C2"}},
                                       {cx.m, cx.n, cx.m}));
        };
        auto sub = [&]() { sylv_expand_m(cx, mvariant, 0, 0, m, p, w, b, true); };
        if (nvariant == 1) {
            gemm_left();
            sub();
        } else {
            sub();
            gemm_right();
        }
    }
}

std::vector<Call> sylv_composed(long m, long n, long b, int outer_m, int mv, int nv) {
    std::vector<Call> out;
    SylvCtx cx{out, m, n};
    if (outer_m)
        sylv_expand_m(cx, mv, nv, 0, m, 0, n, b, false);
    else
        sylv_expand_n_outer(cx, nv, mv, m, n, b);
    return out;
}

// the two 3x3 diagonal-traversal algorithms; panel sub-problems use
// m1 / n1
std::vector<Call> sylv_diag(long m, long n, long b, int which) {
    std::vector<Call> out;
    SylvCtx cx{out, m, n};
    long pm = 0, pn = 0;
    while (pm < m || pn < n) {
        long wm = std::min(b, m - pm), wn = std::min(b, n - pn);
        long rm = m - pm - wm, rn = n - pn - wn;
        long top = rm;  // current row block start
        auto gemm = [&](long row, long col, long mm, long nn, long kk, bool a_left, long a_or_c_off,
                        long b_off) {
            // a_left: A-block times C-block; else C-block times B-block
            cx.out.push_back(make_call(
                "dgemm", {'N', 'N'}, {mm, nn, kk}, {-1.0, 1.0},
                {Operand{a_left ? "A" : "C", a_or_c_off, a_left ? "Ablk" : "Cblk"},
                 Operand{a_left ? "C" : "B", b_off, a_left ? "Cblk" : "Bblk"},
                 Operand{"C", row + col * cx.m, "Cout"}},
                {a_left ? cx.m : cx.m, a_left ? cx.m : cx.n, cx.m}));
        };
        if (which == 1) {
            // C10 -= A12 C20 ; C10 := sylv(A11, B00, C10) [n-panel]
            gemm(top, 0, wm, pn, pm, true, top + (top + wm) * cx.m, (top + wm) + 0 * cx.m);
            sylv_expand_n(cx, 1, top, wm, 0, pn, b);
            // C21 -= C20 B01 ; C21 := sylv(A22, B11, C21) [m-panel]
            gemm(top + wm, pn, pm, wn, pn, false, (top + wm) + 0 * cx.m, 0 + pn * cx.n);
            sylv_expand_m(cx, 1, 0, top + wm, pm, pn, wn, b, true);
            // C11 -= C10 B01 ; C11 -= A12 C21 ; C11 := dtrsyl
            gemm(top, pn, wm, wn, pn, false, top + 0 * cx.m, 0 + pn * cx.n);
            gemm(top, pn, wm, wn, pm, true, top + (top + wm) * cx.m, (top + wm) + pn * cx.m);
            sylv_kernel(cx, top, wm, pn, wn);
        } else {
            // algorithm 10
            sylv_expand_m(cx, 1, 0, top + wm, pm, pn, wn, b, true);   // C21 m-panel
            gemm(top, pn, wm, wn, pm, true, top + (top + wm) * cx.m, (top + wm) + pn * cx.m);
            sylv_kernel(cx, top, wm, pn, wn);
            gemm(0, pn, rm, wn, pm, true, 0 + (top + wm) * cx.m, (top + wm) + pn * cx.m);  // C01 -= A02 C21
            gemm(0, pn, rm, wn, wm, true, 0 + top * cx.m, top + pn * cx.m);                // C01 -= A01 C11
            sylv_expand_m(cx, 1, 0, 0, rm, pn, wn, b, true);          // C01 m-panel
            gemm(0, pn + wn, rm, rn, wn, false, 0 + pn * cx.m, pn + (pn + wn) * cx.n);     // C02
            gemm(top, pn + wn, wm, rn, wn, false, top + pn * cx.m, pn + (pn + wn) * cx.n); // C12
            gemm(top + wm, pn + wn, pm, rn, wn, false, (top + wm) + pn * cx.m,
                 pn + (pn + wn) * cx.n);                                                   // C22
        }
        pm += wm;
        pn += wn;
    }
    return out;
}

std::map<std::string, BlockedAlgorithm> build_library() {
    std::map<std::string, BlockedAlgorithm> lib;
    auto add = [&](const std::string& name, Traversal t, const std::string& parent,
                   BlockedAlgorithm::Shape shape,
                   std::function<std::vector<Call>(long, long, long)> fn) {
        lib[name] = BlockedAlgorithm{name, t, parent, shape, std::move(fn)};
    };
    using Shape = BlockedAlgorithm::Shape;

    add("chol1", Traversal::DiagSE, "dpotrf", Shape::Square,
        [](long, long n, long b) { return chol1(n, b); });
    add("chol2", Traversal::DiagSE, "dpotrf", Shape::Square,
        [](long, long n, long b) { return chol2(n, b); });
    add("chol3", Traversal::DiagSE, "dpotrf", Shape::Square,
        [](long, long n, long b) { return chol3(n, b); });
    add("dpotrf", Traversal::DiagSE, "dpotrf", Shape::Square,
        [](long, long n, long b) { return chol2(n, b); });

    for (int v = 1; v <= 4; ++v)
        add("trinv" + std::to_string(v), Traversal::DiagSE, "dtrtri", Shape::Square,
            [v](long, long n, long b) { return trinv_se(n, b, v); });
    for (int v = 5; v <= 8; ++v)
        add("trinv" + std::to_string(v), Traversal::DiagNW, "dtrtri", Shape::Square,
            [v](long, long n, long b) { return trinv_nw(n, b, v); });
    add("dtrtri", Traversal::DiagNW, "dtrtri", Shape::Square,
        [](long, long n, long b) { return trinv_nw(n, b, 5); });

    add("dlauum", Traversal::DiagSE, "dlauum", Shape::Square,
        [](long, long n, long b) { return lauum_blocked(n, b); });
    add("dsygst", Traversal::DiagSE, "dsygst", Shape::Square,
        [](long, long n, long b) { return sygst_blocked(n, b); });
    add("dgetrf", Traversal::DiagSE, "dgetrf", Shape::RectMN,
        [](long m, long n, long b) { return getrf_blocked(m, n, b); });
    add("dgeqrf", Traversal::DiagSE, "dgeqrf", Shape::RectMN,
        [](long m, long n, long b) { return geqrf_blocked(m, n, b); });

    for (int mv = 1; mv <= 2; ++mv)
        for (int nv = 1; nv <= 2; ++nv) {
            add("sylv_m" + std::to_string(mv) + "n" + std::to_string(nv), Traversal::Vertical,
                "dtrsyl", Shape::Sylvester,
                [mv, nv](long m, long n, long b) { return sylv_composed(m, n, b, 1, mv, nv); });
            add("sylv_n" + std::to_string(nv) + "m" + std::to_string(mv), Traversal::Horizontal,
                "dtrsyl", Shape::Sylvester,
                [mv, nv](long m, long n, long b) { return sylv_composed(m, n, b, 0, mv, nv); });
        }
    add("sylv1", Traversal::DiagSE, "dtrsyl", Shape::Sylvester,
        [](long m, long n, long b) { return sylv_diag(m, n, b, 1); });
    add("sylv10", Traversal::DiagSE, "dtrsyl", Shape::Sylvester,
        [](long m, long n, long b) { return sylv_diag(m, n, b, 10); });

    return lib;
}

}  // namespace

const std::map<std::string, BlockedAlgorithm>& algorithm_library() {
    static const auto lib = build_library();
    return lib;
}

const BlockedAlgorithm& algorithm(const std::string& name) {
    const auto& lib = algorithm_library();
    auto it = lib.find(name);
    if (it == lib.end()) throw std::invalid_argument("unknown blocked algorithm: " + name);
    return it->second;
}

std::vector<std::string> algorithm_names() {
    std::vector<std::string> out;
    for (const auto& [k, v] : algorithm_library()) out.push_back(k);
    return out;
}

std::vector<Call> call_sequence(const std::string& name, long n, long b) {
    if (b < 1) throw std::invalid_argument("block size must be >= 1");
    if (n < 0) throw std::invalid_argument("negative problem size");
    return algorithm(name).expand(n, n, b);
}

std::vector<Call> call_sequence_mn(const std::string& name, long m, long n, long b) {
    if (b < 1) throw std::invalid_argument("block size must be >= 1");
    if (m < 0 || n < 0) throw std::invalid_argument("negative problem size");
    return algorithm(name).expand(m, n, b);
}

long long algorithm_cost(const std::string& name, long n) { return algorithm_cost_mn(name, n, n); }

long long algorithm_cost_mn(const std::string& name, long m, long n) {
    const auto& alg = algorithm(name);
    static const std::map<std::string, std::vector<char>> default_flags = {
        {"dpotrf", {'L'}},         {"dlauum", {'L'}}, {"dtrtri", {'L', 'N'}},
        {"dsygst", {'1', 'L'}},    {"dgetrf", {}},    {"dgeqrf", {}},
        {"dtrsyl", {'N', 'N'}}};
    const auto& flags = default_flags.at(alg.parent);
    if (kernel(alg.parent).size_args.size() == 1) return flop_count(alg.parent, {n}, flags);
    return flop_count(alg.parent, {m, n}, flags);
}

void prepare_buffers(const std::string& name, long m, long n, long b, BufferStore& store,
                     std::uint64_t seed) {
    (void)b;
    const auto& alg = algorithm(name);
    auto fill = [&](const std::string& buf, long rows, long cols, double diag) {
        double* p = store.alloc(buf, (size_t)rows * (size_t)cols);
        std::uint64_t h = seed * 0x9e3779b97f4a7c15ull + 1;
        for (size_t i = 0; i < (size_t)rows * (size_t)cols; ++i) {
            h = h * 6364136223846793005ull + 1442695040888963407ull;
            p[i] = 0.25 + 0.5 * (double)(h >> 40) / (double)(1 << 24);
        }
        for (long d = 0; d < std::min(rows, cols); ++d) p[(size_t)(d + d * rows)] = diag;
    };
    switch (alg.shape) {
        case BlockedAlgorithm::Shape::Square:
            fill("A", n, n, (double)n + 2.0);
            if (name == "dsygst") fill("L", n, n, (double)n + 3.0);
            break;
        case BlockedAlgorithm::Shape::RectMN:
            fill("A", m, n, (double)std::max(m, n) + 2.0);
            if (name == "dgeqrf") {
                store.alloc("tau", (size_t)std::min(m, n));
                fill("W", m, std::max(b, 1L), 1.0);
            }
            if (name == "dgetrf") store.alloc_int("ipiv", (size_t)std::min(m, n));
            break;
        case BlockedAlgorithm::Shape::Sylvester:
            fill("A", m, m, (double)m + 2.0);
            fill("B", n, n, 0.5 * (double)n + 1.0);
            fill("C", m, n, 1.0);
            store.alloc("sylscale", 1);
            break;
    }
    // symmetric positive definite input for the Cholesky family: A := G G'
    if (alg.parent == "dpotrf" || alg.parent == "dlauum" || alg.parent == "dsygst") {
        double* a = store.get("A");
        std::vector<double> g((size_t)n * (size_t)n);
        for (size_t i = 0; i < g.size(); ++i) g[i] = a[i];
        for (long j = 0; j < n; ++j)
            for (long i = 0; i < n; ++i) {
                double acc = 0;
                for (long k = 0; k <= std::min(i, j); ++k)
                    acc += g[(size_t)(i + k * n)] * g[(size_t)(j + k * n)];
                a[(size_t)(i + j * n)] = acc + (i == j ? 1.0 : 0.0);
            }
    }
}

}  // namespace dlap
