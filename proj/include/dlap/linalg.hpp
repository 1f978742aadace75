#pragma once

#include <vector>

namespace dlap {

// Minimum-norm least squares via Householder QR; a is column-major m x n,
// m >= n.  Throws on rank deficiency.
std::vector<double> lstsq(std::vector<double> a, long m, long n, std::vector<double> b);

}  // namespace dlap
