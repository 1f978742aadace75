#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "dlap/kernels.hpp"

namespace dlap {

// Executes kernel calls; real backends run code, synthetic ones advance a
// virtual clock by a deterministic time model.
class Backend {
  public:
    virtual ~Backend() = default;
    virtual void execute(const Call& call, BufferStore& store) = 0;
    virtual std::string id() const = 0;
    // non-null when the backend owns the notion of time (synthetic)
    virtual class Clock* clock() { return nullptr; }
};

class Clock {
  public:
    virtual ~Clock() = default;
    virtual std::uint64_t now_ticks() = 0;
    virtual double tick_seconds() const = 0;
};

class SteadyClock final : public Clock {
  public:
    std::uint64_t now_ticks() override;
    double tick_seconds() const override { return 1e-9; }
};

// rdtsc-based cycle counter; tick length comes from the machine's base
// frequency, never from auto-detection.
class CycleClock final : public Clock {
  public:
    explicit CycleClock(double base_frequency_hz) : freq_(base_frequency_hz) {}
    std::uint64_t now_ticks() override;
    double tick_seconds() const override { return 1.0 / freq_; }
    static bool available();

  private:
    double freq_;
};

class ReferenceBackend final : public Backend {
  public:
    void execute(const Call& call, BufferStore& store) override { dlap::execute(call, store); }
    std::string id() const override { return "reference"; }
};

// Shared library with the BLAS/LAPACK calling convention (all arguments by
// reference, column-major, Fortran symbol names with trailing underscore).
class SharedLibBackend final : public Backend {
  public:
    // env_template: e.g. "OPENBLAS_NUM_THREADS={nt}"; applied before load
    SharedLibBackend(const std::string& path, int threads = 1, const std::string& env_template = "");
    ~SharedLibBackend() override;
    void execute(const Call& call, BufferStore& store) override;
    std::string id() const override { return path_; }

  private:
    std::string path_;
    void* handle_ = nullptr;
};

// Deterministic backend: runs the reference kernels only if asked, and always
// advances a virtual clock by time_model(call).
class SyntheticBackend final : public Backend, public Clock {
  public:
    using TimeModel = std::function<double(const Call&)>;
    explicit SyntheticBackend(TimeModel model, bool run_kernels = false,
                              std::string id = "synthetic")
        : model_(std::move(model)), run_kernels_(run_kernels), id_(std::move(id)) {}

    void execute(const Call& call, BufferStore& store) override {
        if (run_kernels_) dlap::execute(call, store);
        now_ += (std::uint64_t)llround(model_(call) * 1e12);
    }
    std::string id() const override { return id_; }
    Clock* clock() override { return this; }

    std::uint64_t now_ticks() override { return now_; }
    double tick_seconds() const override { return 1e-12; }

  private:
    TimeModel model_;
    bool run_kernels_;
    std::string id_;
    std::uint64_t now_ = 0;
};

// Built-in synthetic time models, selectable from the CLI as
// "synthetic:flops@RATE" or "synthetic:poly".
SyntheticBackend::TimeModel synthetic_flops_model(double flops_per_second);
SyntheticBackend::TimeModel synthetic_poly_model();  // fixed cubic polynomials per kernel

std::unique_ptr<Backend> open_backend(const std::string& spec, int threads = 1,
                                      const std::string& env_template = "");

}  // namespace dlap
