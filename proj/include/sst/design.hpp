#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "sst/threshold.hpp"

namespace sst {

using Signal = std::vector<double>;

/// Square n x n design with X^T X = n I. Immutable once built.
class OrthogonalDesign {
public:
    enum class Provenance { BuiltinTrig, UserLoaded };

    /// Real Fourier basis sampled at t_i = 2*pi*(i-1)/n: a constant column,
    /// then sqrt(2)cos(f t), sqrt(2)sin(f t) for f = 1..n/2-1, then cos(n t/2).
    /// Requires even n >= 4.
    static OrthogonalDesign trig(std::size_t n);

    /// Wraps a row-major n x n matrix; throws std::invalid_argument unless
    /// the Gram property holds to `tolerance`.
    static OrthogonalDesign from_rows(std::size_t n, std::vector<double> row_major,
                                      double tolerance = 1e-8);

    std::size_t size() const noexcept { return n_; }
    Provenance provenance() const noexcept { return provenance_; }
    double at(std::size_t row, std::size_t col) const { return x_[row * n_ + col]; }
    std::span<const double> row_major() const noexcept { return x_; }

    /// max_{j,k} |(X^T X)_{jk} - n delta_{jk}|
    double gram_deviation() const;

    /// Least-squares coefficients X^T y / n.
    Coefficients analyze(std::span<const double> y) const;
    /// X beta.
    Signal synthesize(std::span<const double> beta) const;

private:
    OrthogonalDesign(std::size_t n, std::vector<double> x, Provenance p)
        : n_(n), x_(std::move(x)), provenance_(p) {}

    std::size_t n_;
    std::vector<double> x_;
    Provenance provenance_;
};

/// Per-trial random stream. Seeded only from (master_seed, stream_index), so
/// streams can be created in any order or on any thread.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

    double normal(double sd);

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// y = X b + eps with eps ~ N(0, sigma2 I). sigma2 == 0 gives X b exactly.
Signal generate_observation(const OrthogonalDesign& design, std::span<const double> b,
                            double sigma2, RngStream& rng);

}  // namespace sst
