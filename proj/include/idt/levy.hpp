#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "idt/rng.hpp"

namespace idt {

// One atom of a finite jump measure: mass `rate` at jump size `size`.
struct JumpAtom {
    double size = 0.0;
    double rate = 0.0;
};

enum class JumpKind { none, finite_atoms, stable_tail, gamma_weight };

// Jump measure of a one-parameter Levy law. stable_tail is the two-sided
// power tail K |x|^{-1-alpha} dx split by skew; gamma_weight is
// shape * x^{-1} e^{-rate x} dx on (0,inf).
struct JumpMeasureSpec {
    JumpKind kind = JumpKind::none;
    std::vector<JumpAtom> atoms;                        // finite_atoms
    double alpha = 0.0, scale = 0.0, skew = 0.0;        // stable_tail
    double gamma_shape = 0.0, gamma_rate = 0.0;         // gamma_weight

    static JumpMeasureSpec none() { return {}; }
    static JumpMeasureSpec finite(std::vector<JumpAtom> atoms_) {
        JumpMeasureSpec s;
        s.kind = JumpKind::finite_atoms;
        s.atoms = std::move(atoms_);
        s.validate();
        return s;
    }
    static JumpMeasureSpec stable(double alpha_, double scale_, double skew_) {
        JumpMeasureSpec s;
        s.kind = JumpKind::stable_tail;
        s.alpha = alpha_;
        s.scale = scale_;
        s.skew = skew_;
        s.validate();
        return s;
    }
    static JumpMeasureSpec gamma(double shape_, double rate_) {
        JumpMeasureSpec s;
        s.kind = JumpKind::gamma_weight;
        s.gamma_shape = shape_;
        s.gamma_rate = rate_;
        s.validate();
        return s;
    }

    void validate() const {
        switch (kind) {
            case JumpKind::none:
                break;
            case JumpKind::finite_atoms:
                for (const auto& a : atoms) {
                    if (a.size == 0.0) throw std::invalid_argument("jump measure: atom sizes must be nonzero");
                    if (a.rate <= 0.0) throw std::invalid_argument("jump measure: atom rates must be > 0");
                }
                break;
            case JumpKind::stable_tail:
                if (!(alpha > 0.0 && alpha < 2.0)) throw std::invalid_argument("jump measure: alpha must be in (0,2)");
                if (scale <= 0.0) throw std::invalid_argument("jump measure: scale must be > 0");
                if (skew < -1.0 || skew > 1.0) throw std::invalid_argument("jump measure: skew must be in [-1,1]");
                break;
            case JumpKind::gamma_weight:
                if (gamma_shape <= 0.0 || gamma_rate <= 0.0)
                    throw std::invalid_argument("jump measure: gamma shape and rate must be > 0");
                break;
        }
    }
};

// Generating triplet (b, sigma^2, nu) under the 1_{|x|<1} compensation
// convention; the single convention used throughout the library.
struct LevyTriplet {
    double drift_b = 0.0;
    double gaussian_var = 0.0;
    JumpMeasureSpec jump_measure;

    void validate() const {
        if (gaussian_var < 0.0) throw std::invalid_argument("triplet: gaussian_var must be >= 0");
        jump_measure.validate();
    }
};

enum class LevyFamily { brownian_drift, poisson, compound_poisson, gamma, stable_strict, cauchy };

inline const char* family_name(LevyFamily f) {
    switch (f) {
        case LevyFamily::brownian_drift: return "brownian_drift";
        case LevyFamily::poisson: return "poisson";
        case LevyFamily::compound_poisson: return "compound_poisson";
        case LevyFamily::gamma: return "gamma";
        case LevyFamily::stable_strict: return "stable_strict";
        case LevyFamily::cauchy: return "cauchy";
    }
    return "?";
}

// Weighted atom of a compound-Poisson jump law: P(jump = size) = prob.
struct JumpLawAtom {
    double size = 0.0;
    double prob = 0.0;
};

struct LevyModel {
    LevyFamily family = LevyFamily::brownian_drift;
    double drift = 0.0;             // brownian_drift b
    double sigma2 = 1.0;            // brownian_drift
    double rate = 0.0;              // poisson / compound_poisson intensity
    double jump_size = 1.0;         // poisson
    std::vector<JumpLawAtom> jump_law;  // compound_poisson
    double shape = 1.0;             // gamma
    double gamma_rate = 1.0;        // gamma
    double alpha = 1.0;             // stable_strict
    double scale = 1.0;             // stable_strict / cauchy, symbol -scale*|l|^alpha
    bool one_sided = false;         // stable_strict subordinator (alpha < 1)

    static LevyModel brownian(double b, double sigma2_) {
        LevyModel m;
        m.family = LevyFamily::brownian_drift;
        m.drift = b;
        m.sigma2 = sigma2_;
        m.validate();
        return m;
    }
    static LevyModel poisson_process(double rate_, double jump) {
        LevyModel m;
        m.family = LevyFamily::poisson;
        m.rate = rate_;
        m.jump_size = jump;
        m.validate();
        return m;
    }
    static LevyModel compound_poisson(double rate_, std::vector<JumpLawAtom> law) {
        LevyModel m;
        m.family = LevyFamily::compound_poisson;
        m.rate = rate_;
        m.jump_law = std::move(law);
        m.validate();
        return m;
    }
    static LevyModel gamma_process(double shape_, double rate_) {
        LevyModel m;
        m.family = LevyFamily::gamma;
        m.shape = shape_;
        m.gamma_rate = rate_;
        m.validate();
        return m;
    }
    static LevyModel stable(double alpha_, double scale_, bool one_sided_ = false) {
        LevyModel m;
        m.family = LevyFamily::stable_strict;
        m.alpha = alpha_;
        m.scale = scale_;
        m.one_sided = one_sided_;
        m.validate();
        return m;
    }
    static LevyModel cauchy_process(double scale_) {
        LevyModel m;
        m.family = LevyFamily::cauchy;
        m.scale = scale_;
        m.validate();
        return m;
    }

    void validate() const {
        switch (family) {
            case LevyFamily::brownian_drift:
                if (sigma2 < 0.0) throw std::invalid_argument("brownian_drift: sigma2 must be >= 0");
                break;
            case LevyFamily::poisson:
                if (rate <= 0.0) throw std::invalid_argument("poisson: rate must be > 0");
                if (jump_size == 0.0) throw std::invalid_argument("poisson: jump size must be nonzero");
                break;
            case LevyFamily::compound_poisson: {
                if (rate <= 0.0) throw std::invalid_argument("compound_poisson: rate must be > 0");
                if (jump_law.empty()) throw std::invalid_argument("compound_poisson: jump law must be nonempty");
                double total = 0.0;
                for (const auto& a : jump_law) {
                    if (a.size == 0.0) throw std::invalid_argument("compound_poisson: jump sizes must be nonzero");
                    if (a.prob <= 0.0) throw std::invalid_argument("compound_poisson: probabilities must be > 0");
                    total += a.prob;
                }
                if (std::abs(total - 1.0) > 1e-12)
                    throw std::invalid_argument("compound_poisson: jump law probabilities must sum to 1");
                break;
            }
            case LevyFamily::gamma:
                if (shape <= 0.0 || gamma_rate <= 0.0) throw std::invalid_argument("gamma: shape and rate must be > 0");
                break;
            case LevyFamily::stable_strict:
                if (!(alpha > 0.0 && alpha < 2.0))
                    throw std::invalid_argument("stable_strict: alpha must be in (0,2); use brownian_drift for alpha=2");
                if (scale <= 0.0) throw std::invalid_argument("stable_strict: scale must be > 0");
                if (one_sided && alpha >= 1.0)
                    throw std::invalid_argument("stable_strict: one-sided subordinator requires alpha < 1");
                break;
            case LevyFamily::cauchy:
                if (scale <= 0.0) throw std::invalid_argument("cauchy: scale must be > 0");
                break;
        }
    }

    std::string label() const { return family_name(family); }
};

// Values of a process on a one-dimensional time grid, with the seed that
// produced them. values[0] is always 0.
struct PathSample {
    std::vector<double> times;
    std::vector<double> values;
    std::uint64_t seed = 0;
};

inline void require_grid(std::span<const double> times) {
    if (times.size() < 2) throw std::invalid_argument("grid error: need at least 2 grid points");
    if (times[0] != 0.0) throw std::invalid_argument("grid error: grid must start at 0");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1])) throw std::invalid_argument("grid error: grid must be strictly increasing");
}

// psi(lambda) with E exp(i lambda L_t) = exp(t psi(lambda)), closed form per family.
inline std::complex<double> levy_symbol(const LevyModel& model, double lam) {
    using namespace std::complex_literals;
    model.validate();
    switch (model.family) {
        case LevyFamily::brownian_drift:
            return std::complex<double>(-0.5 * model.sigma2 * lam * lam, model.drift * lam);
        case LevyFamily::poisson:
            return model.rate * (std::exp(1i * lam * model.jump_size) - 1.0);
        case LevyFamily::compound_poisson: {
            std::complex<double> acc = 0.0;
            for (const auto& a : model.jump_law) acc += a.prob * (std::exp(1i * lam * a.size) - 1.0);
            return model.rate * acc;
        }
        case LevyFamily::gamma:
            return -model.shape * std::log(1.0 - 1i * lam / model.gamma_rate);
        case LevyFamily::stable_strict: {
            const double mag = model.scale * std::pow(std::abs(lam), model.alpha);
            if (!model.one_sided) return {-mag, 0.0};
            // one-sided subordinator: Laplace exponent -scale*s^alpha continued to s = -i*lam
            const double half = 0.5 * std::numbers::pi * model.alpha;
            const double sgn = (lam > 0) - (lam < 0);
            return {-mag * std::cos(half), mag * std::sin(half) * sgn};
        }
        case LevyFamily::cauchy:
            return {-model.scale * std::abs(lam), 0.0};
    }
    throw std::logic_error("levy_symbol: unknown family");
}

namespace detail {

// One increment of L over a cell of length dt.
inline double levy_increment(const LevyModel& m, double dt, Rng& rng) {
    if (dt < 0.0) throw std::invalid_argument("levy_increment: dt must be >= 0");
    if (dt == 0.0) return 0.0;
    switch (m.family) {
        case LevyFamily::brownian_drift:
            return m.drift * dt + std::sqrt(m.sigma2 * dt) * rng.normal();
        case LevyFamily::poisson:
            return m.jump_size * double(rng.poisson(m.rate * dt));
        case LevyFamily::compound_poisson: {
            const long long n = rng.poisson(m.rate * dt);
            double acc = 0.0;
            for (long long k = 0; k < n; ++k) {
                double u = rng.uniform();
                double cum = 0.0;
                double size = m.jump_law.back().size;
                for (const auto& a : m.jump_law) {
                    cum += a.prob;
                    if (u <= cum) { size = a.size; break; }
                }
                acc += size;
            }
            return acc;
        }
        case LevyFamily::gamma:
            return rng.gamma(m.shape * dt, m.gamma_rate);
        case LevyFamily::stable_strict: {
            const double unit = std::pow(m.scale * dt, 1.0 / m.alpha);
            return unit * (m.one_sided ? rng.positive_stable(m.alpha) : rng.sym_stable(m.alpha));
        }
        case LevyFamily::cauchy:
            return m.scale * dt * rng.cauchy();
    }
    throw std::logic_error("levy_increment: unknown family");
}

}  // namespace detail

// i.i.d. samples of L_t. Deterministic given seed; per-call derived stream.
inline std::vector<double> sample_marginal(const LevyModel& model, double t, std::size_t count, std::uint64_t seed) {
    model.validate();
    if (t < 0.0) throw std::invalid_argument("sample_marginal: t must be >= 0");
    if (count == 0) throw std::invalid_argument("sample_marginal: empty request (count must be > 0)");
    std::vector<double> out(count, 0.0);
    if (t == 0.0) return out;
    Rng rng(derive_stream(seed, 0));
    for (std::size_t i = 0; i < count; ++i) out[i] = detail::levy_increment(model, t, rng);
    return out;
}

// Cadlag skeleton on a grid: independent increments with the exact law of
// L_{dt} per cell. Each cell consumes its own derived stream (index = cell),
// so refining the grid leaves coarser cells' distributions untouched.
inline PathSample simulate_path(const LevyModel& model, std::span<const double> times, std::uint64_t seed) {
    model.validate();
    require_grid(times);
    PathSample p;
    p.times.assign(times.begin(), times.end());
    p.values.assign(times.size(), 0.0);
    p.seed = seed;
    for (std::size_t i = 1; i < times.size(); ++i) {
        Rng rng(derive_stream(seed, i - 1));
        p.values[i] = p.values[i - 1] + detail::levy_increment(model, times[i] - times[i - 1], rng);
    }
    return p;
}

namespace detail {

// C(alpha) = int_0^inf (1-cos u) u^{-1-alpha} du, the constant tying the
// symmetric stable tail coefficient to the symbol scale. Continuous at 1.
inline double stable_cos_constant(double alpha) {
    if (std::abs(alpha - 1.0) < 1e-9) return 0.5 * std::numbers::pi;
    return std::tgamma(2.0 - alpha) * std::cos(0.5 * std::numbers::pi * alpha) / (alpha * (1.0 - alpha));
}

}  // namespace detail

// Generating triplet under the |x|<1 compensation convention.
inline LevyTriplet triplet_of(const LevyModel& model) {
    model.validate();
    LevyTriplet t;
    switch (model.family) {
        case LevyFamily::brownian_drift:
            t.drift_b = model.drift;
            t.gaussian_var = model.sigma2;
            break;
        case LevyFamily::poisson:
            t.jump_measure = JumpMeasureSpec::finite({{model.jump_size, model.rate}});
            if (std::abs(model.jump_size) < 1.0) t.drift_b = model.jump_size * model.rate;
            break;
        case LevyFamily::compound_poisson: {
            std::vector<JumpAtom> atoms;
            for (const auto& a : model.jump_law) {
                atoms.push_back({a.size, model.rate * a.prob});
                if (std::abs(a.size) < 1.0) t.drift_b += a.size * model.rate * a.prob;
            }
            t.jump_measure = JumpMeasureSpec::finite(std::move(atoms));
            break;
        }
        case LevyFamily::gamma:
            t.jump_measure = JumpMeasureSpec::gamma(model.shape, model.gamma_rate);
            t.drift_b = model.shape * (1.0 - std::exp(-model.gamma_rate)) / model.gamma_rate;
            break;
        case LevyFamily::stable_strict: {
            if (model.one_sided) {
                // nu = K x^{-1-alpha} on (0,inf) with Laplace exponent scale*s^alpha
                const double k = model.scale * model.alpha / std::tgamma(1.0 - model.alpha);
                t.jump_measure = JumpMeasureSpec::stable(model.alpha, k, 1.0);
                t.drift_b = k / (1.0 - model.alpha);  // int_0^1 x nu(dx)
            } else {
                const double k = model.scale / (2.0 * detail::stable_cos_constant(model.alpha));
                t.jump_measure = JumpMeasureSpec::stable(model.alpha, k, 0.0);
                t.drift_b = 0.0;
            }
            break;
        }
        case LevyFamily::cauchy:
            t.jump_measure = JumpMeasureSpec::stable(1.0, model.scale / std::numbers::pi, 0.0);
            t.drift_b = 0.0;
            break;
    }
    t.validate();
    return t;
}

inline bool has_finite_mean(const LevyModel& model) {
    switch (model.family) {
        case LevyFamily::stable_strict: return model.alpha > 1.0;  // one-sided requires alpha<1: infinite mean
        case LevyFamily::cauchy: return false;
        default: return true;
    }
}

// b~ = E L_1. Requires a finite mean.
inline double mean_rate(const LevyModel& model) {
    if (!has_finite_mean(model)) throw std::invalid_argument("mean_rate: model has no finite mean");
    switch (model.family) {
        case LevyFamily::brownian_drift: return model.drift;
        case LevyFamily::poisson: return model.rate * model.jump_size;
        case LevyFamily::compound_poisson: {
            double m = 0.0;
            for (const auto& a : model.jump_law) m += a.prob * a.size;
            return model.rate * m;
        }
        case LevyFamily::gamma: return model.shape / model.gamma_rate;
        case LevyFamily::stable_strict: return 0.0;  // symmetric, alpha > 1
        default: break;
    }
    throw std::invalid_argument("mean_rate: unsupported family");
}

// Var L_1 (may be +inf for heavy tails).
inline double var_rate(const LevyModel& model) {
    switch (model.family) {
        case LevyFamily::brownian_drift: return model.sigma2;
        case LevyFamily::poisson: return model.rate * model.jump_size * model.jump_size;
        case LevyFamily::compound_poisson: {
            double m2 = 0.0;
            for (const auto& a : model.jump_law) m2 += a.prob * a.size * a.size;
            return model.rate * m2;
        }
        case LevyFamily::gamma: return model.shape / (model.gamma_rate * model.gamma_rate);
        default: return std::numeric_limits<double>::infinity();
    }
}

}  // namespace idt
