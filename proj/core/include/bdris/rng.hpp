// SPDX-License-Identifier: Apache-2.0
//
// Deterministic random stream: mt19937_64 with an explicit Box-Muller
// transform, so realizations are bit-identical across platforms and
// reproducible from the seed alone.
#ifndef BDRIS_RNG_HPP
#define BDRIS_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace bdris {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in (0, 1]; never returns 0 so log() below is safe.
    double uniform() {
        const std::uint64_t x = engine_();
        return (static_cast<double>(x >> 11) + 1.0) * 0x1p-53;
    }

    /// Standard real Gaussian.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Circularly-symmetric complex Gaussian with unit variance.
    std::complex<double> complex_gaussian() {
        const double re = gaussian();
        const double im = gaussian();
        return {re * 0.7071067811865476, im * 0.7071067811865476};
    }

  private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace bdris

#endif
