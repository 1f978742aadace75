#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dlap/kernels.hpp"
#include "dlap/sampler.hpp"

// Piecewise multivariate polynomial runtime models per (kernel, case,
// domain), generated by adaptive refinement over repeated measurements.

namespace dlap {

enum class GridKind { Cartesian, Chebyshev };
enum class RefStat { Min, Median };
enum class ErrMeasure { Average, Maximum, P90 };

struct ModelConfig {
    int overfitting = 2;       // added monomial degree per dimension (0..2)
    int oversampling = 4;      // grid points per dimension beyond degree+1
    GridKind grid = GridKind::Chebyshev;
    int repetitions = 10;
    RefStat reference = RefStat::Min;
    ErrMeasure error_measure = ErrMeasure::Maximum;
    double error_bound = 0.01;
    long min_width = 32;       // multiple of 8

    void validate() const;
};

// The default configuration with the dgemm and multi-thread overrides.
ModelConfig default_config(const std::string& kernel, int threads);

struct Domain {
    // per size-dimension closed integer interval [lo, hi], multiples of 8
    std::vector<std::array<long, 2>> bounds;

    size_t dims() const { return bounds.size(); }
    long width(size_t i) const { return bounds[i][1] - bounds[i][0]; }
    bool contains(const std::vector<long>& x) const;
    void validate() const;
};

enum class ScalarClass { MinusOne, Zero, One, Other };
enum class IncClass { One, Large };

ScalarClass classify_scalar(double v);
IncClass classify_increment(long inc);
char scalar_class_code(ScalarClass c);
char inc_class_code(IncClass c);

// Fixed flag values plus scalar/increment classes: one execution branch
// family of a kernel.
struct KernelCase {
    std::vector<char> flags;
    std::vector<ScalarClass> scalars;
    std::vector<IncClass> incs;

    static KernelCase of(const Call& call);
    std::string key() const;
    bool matches(const Call& call) const;
};

struct Monomial {
    std::vector<int> powers;
    double eval(const std::vector<long>& x) const;
};

// All monomials with per-dimension degree bounded by the flop-formula degree
// plus the overfitting increment; graded order.
std::vector<Monomial> monomial_basis(const std::string& kernel, const KernelCase& kase,
                                     int overfitting);

// Boundary-including Chebyshev nodes cos(i*pi/(n-1)) on [-1, 1], descending.
std::vector<double> chebyshev_nodes(int count);

// Per-dimension grid mapped into [lo, hi] and rounded to multiples of 8;
// duplicates collapsed, sorted ascending.
std::vector<long> grid_axis(long lo, long hi, int count, GridKind kind);

// Cartesian product of per-dimension axes.
std::vector<std::vector<long>> grid_points(const Domain& domain, const std::vector<int>& counts,
                                           GridKind kind);

// Coefficients minimizing the squared relative error of the polynomial
// against the values (all > 0).
std::vector<double> fit_relative_lsq(const std::vector<std::vector<long>>& points,
                                     const std::vector<double>& values,
                                     const std::vector<Monomial>& basis);

double eval_poly(const std::vector<double>& beta, const std::vector<Monomial>& basis,
                 const std::vector<long>& x);

double leaf_error(const std::vector<std::vector<long>>& points, const std::vector<double>& values,
                  const std::vector<double>& beta, const std::vector<Monomial>& basis,
                  ErrMeasure measure);

// Split along the relatively largest splittable dimension at the rounded
// midpoint 8*floor((l+u+8)/16).
std::pair<Domain, Domain> split_domain(const Domain& d, long min_width);

inline constexpr int kNumStats = 5;  // min, median, max, mean, std

struct Leaf {
    Domain domain;
    std::array<std::vector<double>, kNumStats> coeffs;
    double achieved_error = 0;
    int samples = 0;
};

struct PiecewiseModel {
    std::string kernel;
    KernelCase kase;
    std::vector<Monomial> basis;
    Domain root;
    std::vector<Leaf> leaves;
    ModelConfig config;
    std::uint64_t seed = 0;

    SummaryStats evaluate(const Call& call) const;
    const Leaf& locate(const std::vector<long>& sizes) const;
};

// Recursive sample-fit-split procedure; measurement calls use the fixed large
// leading dimension and the case's representative scalar/increment values.
PiecewiseModel adaptive_refine(Sampler& sampler, const ModelConfig& config,
                               const std::string& kernel, const KernelCase& kase,
                               const Domain& domain, std::uint64_t seed = 0);

// Measurement call for one grid point of a case (also used by the CLI).
Call measurement_call(const std::string& kernel, const KernelCase& kase,
                      const std::vector<long>& sizes);

struct ModelSet {
    std::string machine;
    std::string backend_id;
    int threads = 1;
    std::uint64_t seed = 0;
    std::vector<PiecewiseModel> models;

    const PiecewiseModel* find(const Call& call) const;
    // five-statistic estimate; zero-extent calls and pseudo calls are zero
    SummaryStats estimate(const Call& call) const;
};

std::string save_models(const ModelSet& set);          // JSON text
ModelSet load_models(const std::string& json_text);

}  // namespace dlap
