#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace idt {

// SplitMix64 finalizer; full avalanche, used only for seed derivation.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derived stream seed for (root, index). Streams with distinct indices may be
// consumed concurrently; the derivation is stateless.
constexpr std::uint64_t derive_stream(std::uint64_t root, std::uint64_t index) {
    return mix64(root ^ mix64(index + 0x632be59bd9b4e019ULL));
}

// Variate generator over a fixed-sequence engine. All samplers consume only
// uniforms from mt19937_64, so output sequences do not depend on the C++
// standard library's distribution implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Uniform on the open interval (0,1); never returns an exact endpoint.
    double uniform() {
        return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1p-53;
    }

    // Standard normal, Box-Muller with pair caching.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    double exponential() { return -std::log(uniform()); }

    // Gamma(shape, rate), Marsaglia-Tsang squeeze with the shape<1 boost.
    double gamma(double shape, double rate) {
        if (shape <= 0.0 || rate <= 0.0) throw std::invalid_argument("gamma: shape and rate must be > 0");
        if (shape < 1.0) {
            const double u = uniform();
            return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
        }
    }

    // Poisson(mean) by multiplicative inversion; large means are split into
    // additive chunks so the product of uniforms stays away from underflow.
    long long poisson(double mean) {
        if (mean < 0.0) throw std::invalid_argument("poisson: mean must be >= 0");
        long long total = 0;
        while (mean > 16.0) {
            total += poisson_small(16.0);
            mean -= 16.0;
        }
        return total + poisson_small(mean);
    }

    // Standard Cauchy (symmetric 1-stable, CF e^{-|l|}).
    double cauchy() { return std::tan(std::numbers::pi * (uniform() - 0.5)); }

    // Symmetric strictly alpha-stable, CF e^{-|l|^alpha}, Chambers-Mallows-Stuck.
    double sym_stable(double alpha) {
        if (alpha <= 0.0 || alpha >= 2.0) throw std::invalid_argument("sym_stable: alpha must be in (0,2)");
        if (std::abs(alpha - 1.0) < 1e-12) return cauchy();
        const double u = std::numbers::pi * (uniform() - 0.5);
        const double w = exponential();
        const double t1 = std::sin(alpha * u) / std::pow(std::cos(u), 1.0 / alpha);
        const double t2 = std::pow(std::cos((1.0 - alpha) * u) / w, (1.0 - alpha) / alpha);
        return t1 * t2;
    }

    // Positive strictly alpha-stable, Laplace transform e^{-s^alpha}, alpha in (0,1).
    // Kanter's representation (the one-sided Chambers-Mallows-Stuck case).
    double positive_stable(double alpha) {
        if (alpha <= 0.0 || alpha >= 1.0) throw std::invalid_argument("positive_stable: alpha must be in (0,1)");
        const double th = std::numbers::pi * uniform();
        const double w = exponential();
        const double s1 = std::sin(alpha * th);
        const double s2 = std::sin((1.0 - alpha) * th);
        const double s = std::sin(th);
        return s1 * std::pow(s2 / w, (1.0 - alpha) / alpha) / std::pow(s, 1.0 / alpha);
    }

    std::mt19937_64& engine() { return eng_; }

  private:
    long long poisson_small(double mean) {
        if (mean <= 0.0) return 0;
        const double limit = std::exp(-mean);
        long long k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform();
        } while (p > limit);
        return k - 1;
    }

    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace idt
