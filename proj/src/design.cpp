#include "sst/design.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sst {

namespace {

void require_length(std::size_t got, std::size_t want, const char* what) {
    if (got != want) {
        throw std::invalid_argument(std::string(what) + ": length " + std::to_string(got) +
                                    " does not match design size " + std::to_string(want));
    }
}

}  // namespace

OrthogonalDesign OrthogonalDesign::trig(std::size_t n) {
    if (n < 4 || n % 2 != 0) {
        throw std::invalid_argument("trig design needs an even n >= 4");
    }
    const std::size_t half = n / 2;
    std::vector<double> x(n * n);
    const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        double* row = x.data() + i * n;
        row[0] = 1.0;
        for (std::size_t f = 1; f < half; ++f) {
            // Reduce the phase exactly before converting to an angle.
            const double angle = step * static_cast<double>((f * i) % n);
            row[2 * f - 1] = std::numbers::sqrt2 * std::cos(angle);
            row[2 * f] = std::numbers::sqrt2 * std::sin(angle);
        }
        row[n - 1] = (i % 2 == 0) ? 1.0 : -1.0;
    }
    return OrthogonalDesign(n, std::move(x), Provenance::BuiltinTrig);
}

OrthogonalDesign OrthogonalDesign::from_rows(std::size_t n, std::vector<double> row_major,
                                             double tolerance) {
    if (n == 0) throw std::invalid_argument("design must be non-empty");
    require_length(row_major.size(), n * n, "design matrix");
    for (double v : row_major) {
        if (!std::isfinite(v)) throw std::invalid_argument("design matrix has non-finite entries");
    }
    OrthogonalDesign d(n, std::move(row_major), Provenance::UserLoaded);
    const double dev = d.gram_deviation();
    if (!(dev <= tolerance)) {
        throw std::invalid_argument("design violates X^T X = n I (max deviation " +
                                    std::to_string(dev) + ")");
    }
    return d;
}

double OrthogonalDesign::gram_deviation() const {
    const std::size_t n = n_;
    std::vector<double> gram(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = x_.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) {
            const double xij = row[j];
            double* g = gram.data() + j * n;
            for (std::size_t k = j; k < n; ++k) g[k] += xij * row[k];
        }
    }
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = j; k < n; ++k) {
            const double target = (j == k) ? static_cast<double>(n) : 0.0;
            worst = std::max(worst, std::abs(gram[j * n + k] - target));
        }
    }
    return worst;
}

Coefficients OrthogonalDesign::analyze(std::span<const double> y) const {
    require_length(y.size(), n_, "signal");
    Coefficients b(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        const double yi = y[i];
        const double* row = x_.data() + i * n_;
        for (std::size_t k = 0; k < n_; ++k) b[k] += row[k] * yi;
    }
    const double inv_n = 1.0 / static_cast<double>(n_);
    for (double& v : b) v *= inv_n;
    return b;
}

Signal OrthogonalDesign::synthesize(std::span<const double> beta) const {
    require_length(beta.size(), n_, "coefficients");
    Signal y(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        const double* row = x_.data() + i * n_;
        double acc = 0.0;
        for (std::size_t k = 0; k < n_; ++k) acc += row[k] * beta[k];
        y[i] = acc;
    }
    return y;
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index) {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                      static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(stream_index),
                      static_cast<std::uint32_t>(stream_index >> 32)};
    engine_.seed(seq);
}

double RngStream::normal(double sd) { return sd * normal_(engine_); }

Signal generate_observation(const OrthogonalDesign& design, std::span<const double> b,
                            double sigma2, RngStream& rng) {
    if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) {
        throw std::invalid_argument("sigma2 must be >= 0");
    }
    Signal y = design.synthesize(b);
    if (sigma2 > 0.0) {
        const double sd = std::sqrt(sigma2);
        for (double& v : y) v += rng.normal(sd);
    }
    return y;
}

}  // namespace sst
