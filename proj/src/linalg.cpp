#include "dlap/linalg.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dlap {

std::vector<double> lstsq(std::vector<double> a, long m, long n, std::vector<double> b) {
    if (m < n) throw std::invalid_argument("lstsq: fewer rows than columns");
    if ((long)b.size() != m) throw std::invalid_argument("lstsq: rhs size mismatch");
    auto A = [&](long i, long j) -> double& { return a[(size_t)(i + j * m)]; };

    // equilibrate columns; monomial designs span many orders of magnitude
    std::vector<double> colscale((size_t)n, 1.0);
    for (long j = 0; j < n; ++j) {
        double mx = 0;
        for (long i = 0; i < m; ++i) mx = std::max(mx, std::fabs(A(i, j)));
        if (mx > 0) {
            colscale[(size_t)j] = mx;
            for (long i = 0; i < m; ++i) A(i, j) /= mx;
        }
    }

    std::vector<double> tau((size_t)n, 0.0);
    for (long j = 0; j < n; ++j) {
        double alpha = A(j, j), xnorm = 0;
        for (long i = j + 1; i < m; ++i) xnorm += A(i, j) * A(i, j);
        if (xnorm == 0.0) {
            tau[(size_t)j] = 0.0;
            continue;
        }
        double beta = -std::copysign(std::sqrt(alpha * alpha + xnorm), alpha);
        tau[(size_t)j] = (beta - alpha) / beta;
        double scale = 1.0 / (alpha - beta);
        for (long i = j + 1; i < m; ++i) A(i, j) *= scale;
        A(j, j) = beta;
        for (long k = j + 1; k < n; ++k) {
            double w = A(j, k);
            for (long i = j + 1; i < m; ++i) w += A(i, j) * A(i, k);
            w *= tau[(size_t)j];
            A(j, k) -= w;
            for (long i = j + 1; i < m; ++i) A(i, k) -= A(i, j) * w;
        }
        // apply reflector to the rhs as we go
        double w = b[(size_t)j];
        for (long i = j + 1; i < m; ++i) w += A(i, j) * b[(size_t)i];
        w *= tau[(size_t)j];
        b[(size_t)j] -= w;
        for (long i = j + 1; i < m; ++i) b[(size_t)i] -= A(i, j) * w;
    }

    double rmax = 0;
    for (long j = 0; j < n; ++j) rmax = std::max(rmax, std::fabs(A(j, j)));
    double tol = rmax * (double)std::max(m, n) * std::numeric_limits<double>::epsilon();
    for (long j = 0; j < n; ++j)
        if (std::fabs(A(j, j)) <= tol)
            throw std::domain_error("lstsq: rank-deficient design matrix");

    std::vector<double> x((size_t)n);
    for (long i = n - 1; i >= 0; --i) {
        double acc = b[(size_t)i];
        for (long j = i + 1; j < n; ++j) acc -= A(i, j) * x[(size_t)j];
        x[(size_t)i] = acc / A(i, i);
    }
    for (long j = 0; j < n; ++j) x[(size_t)j] /= colscale[(size_t)j];
    return x;
}

}  // namespace dlap
