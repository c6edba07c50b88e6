#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "idt/levy.hpp"
#include "idt/linalg.hpp"
#include "idt/quadrature.hpp"
#include "idt/verify.hpp"

namespace idt {

// Two-argument covariance function on [0,inf)^2 (or a hinted subdomain).
struct CovKernel {
    std::function<double(double, double)> eval;
    std::string label;
    std::optional<std::pair<double, double>> domain_hint;  // closed interval both arguments live in

    double operator()(double s, double t) const { return eval(s, t); }
};

inline CovKernel brownian_kernel() {
    return {[](double s, double t) { return std::min(s, t); }, "min(s,t)", std::nullopt};
}

// Scaling identity |k(a s, a t) - a k(s,t)| <= tol over all probe pairs and scales.
inline VerdictReport kernel_idt_check(const CovKernel& k, std::span<const double> scales,
                                      std::span<const std::pair<double, double>> grid, double tol) {
    if (grid.empty()) throw std::invalid_argument("kernel_idt_check: empty probe grid");
    double worst = 0.0;
    double ws = 0, wt = 0, wa = 1;
    for (const auto& [s, t] : grid) {
        const double base = k(s, t);
        for (double a : scales) {
            if (!(a > 0.0)) throw std::invalid_argument("kernel_idt_check: scales must be > 0");
            const double v = std::abs(k(a * s, a * t) - a * base);
            if (v > worst) {
                worst = v;
                ws = s; wt = t; wa = a;
            }
        }
    }
    auto r = VerdictReport::make("kernel_idt_check[" + k.label + "]", worst, tol);
    r.meta("worst_s", ws).meta("worst_t", wt).meta("worst_scale", wa);
    return r;
}

// Covariance of t^{1/2-H} B^H_t: k(s,t) = (st)^{1/2-H} * (s^{2H}+t^{2H}-|t-s|^{2H})/2.
inline CovKernel fbm_rescaled_kernel(double h) {
    if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument("fbm_rescaled_kernel: H must be in (0,1)");
    auto eval = [h](double s, double t) {
        if (s <= 0.0 || t <= 0.0) return 0.0;
        const double fbm = 0.5 * (std::pow(s, 2 * h) + std::pow(t, 2 * h) - std::pow(std::abs(t - s), 2 * h));
        return std::pow(s * t, 0.5 - h) * fbm;
    };
    return {eval, "fbm_rescaled(H=" + std::to_string(h) + ")", std::nullopt};
}

// Covariance of t^a B_{t^{1-2a}}: k(s,t) = (st)^a * min(s^{1-2a}, t^{1-2a}).
inline CovKernel time_warp_kernel(double a) {
    if (!(a <= 0.5)) throw std::invalid_argument("time_warp_kernel: alpha must be <= 1/2");
    auto eval = [a](double s, double t) {
        if (s <= 0.0 || t <= 0.0) return 0.0;
        return std::pow(s * t, a) * std::min(std::pow(s, 1 - 2 * a), std::pow(t, 1 - 2 * a));
    };
    return {eval, "time_warp(a=" + std::to_string(a) + ")", std::nullopt};
}

namespace detail {

// Worst relative homogeneity violation of k at degree `deg` over a fixed probe set.
struct HomogeneityProbe {
    double worst = 0.0;
    double s = 0, t = 0, lam = 1;
};

inline HomogeneityProbe probe_homogeneity(const CovKernel& k, double deg) {
    const double pts[4] = {0.5, 1.0, 1.7, 2.3};
    const double lams[2] = {2.0, 3.0};
    HomogeneityProbe out;
    for (double s : pts)
        for (double t : pts)
            for (double lam : lams) {
                const double lhs = k(lam * s, lam * t);
                const double rhs = std::pow(lam, deg) * k(s, t);
                const double v = std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
                if (v > out.worst) out = {v, s, t, lam};
            }
    return out;
}

}  // namespace detail

// Given k0 homogeneous of degree a in [0,1], returns (st)^{(1-a)/2} k0(s,t),
// which is homogeneous of degree 1.
inline CovKernel general_rescale_kernel(const CovKernel& k0, double a) {
    if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("general_rescale_kernel: alpha must be in [0,1]");
    const auto probe = detail::probe_homogeneity(k0, a);
    if (probe.worst > 1e-8) {
        std::ostringstream os;
        os << "general_rescale_kernel: base kernel fails degree-" << a << " homogeneity; worst probe pair (s,t,lambda)=("
           << probe.s << "," << probe.t << "," << probe.lam << ") violation " << probe.worst;
        throw std::invalid_argument(os.str());
    }
    const double e = 0.5 * (1.0 - a);
    auto base = k0.eval;
    auto eval = [base, e](double s, double t) {
        if (e > 0.0 && (s <= 0.0 || t <= 0.0)) return 0.0;
        return std::pow(s * t, e) * base(s, t);
    };
    return {eval, "rescaled[" + k0.label + "]", k0.domain_hint};
}

// The exponential time change y -> e^{-y/2} G_{e^y} has covariance
// c~(y,z) = e^{-(y+z)/2} k(e^y, e^z); passes iff c~ depends on |y-z| only.
inline VerdictReport lamperti_stationarity_check(const CovKernel& k, std::span<const double> lags, double tol) {
    std::vector<double> base = {-1.0, -0.5, 0.0, 0.5, 1.0};
    const double lo = k.domain_hint ? k.domain_hint->first : 0.0;
    const double hi = k.domain_hint ? k.domain_hint->second : std::numeric_limits<double>::infinity();
    double worst = 0.0;
    double worst_lag = 0.0;
    for (double lag : lags) {
        if (lag < 0.0) throw std::invalid_argument("lamperti_stationarity_check: lags must be >= 0");
        double mn = std::numeric_limits<double>::infinity();
        double mx = -mn;
        int used = 0;
        for (double y : base) {
            const double s = std::exp(y), t = std::exp(y + lag);
            if (s < lo || t < lo || s > hi || t > hi) continue;
            const double v = std::exp(-0.5 * (2 * y + lag)) * k(s, t);
            mn = std::min(mn, v);
            mx = std::max(mx, v);
            ++used;
        }
        if (used >= 2 && mx - mn > worst) {
            worst = mx - mn;
            worst_lag = lag;
        }
    }
    auto r = VerdictReport::make("lamperti_stationarity[" + k.label + "]", worst, tol);
    r.meta("worst_lag", worst_lag);
    return r;
}

inline SymMatrix gram_matrix(const CovKernel& k, std::span<const double> times) {
    SymMatrix g(times.size());
    for (std::size_t i = 0; i < times.size(); ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            const double v = k(times[i], times[j]);
            g.at(i, j) = v;
            g.at(j, i) = v;
        }
    return g;
}

// Joint centered Gaussian draws with the Gram covariance, row-major
// count x times. Throws a kernel error if the Gram matrix is not PSD within
// the jitter budget.
inline std::vector<double> gaussian_joint_samples(const CovKernel& k, std::span<const double> times, std::size_t count,
                                                  std::uint64_t seed) {
    PsdFactor f;
    try {
        f = psd_factor_with_jitter(gram_matrix(k, times));
    } catch (const std::runtime_error& e) {
        throw std::runtime_error("kernel error [" + k.label + "]: " + e.what());
    }
    const std::size_t m = times.size();
    std::vector<double> out(count * m, 0.0);
    std::vector<double> z(f.rank);
    for (std::size_t r = 0; r < count; ++r) {
        Rng rng(derive_stream(seed, r));
        for (std::size_t j = 0; j < f.rank; ++j) z[j] = rng.normal();
        f.apply(z, {out.data() + r * m, m});
    }
    return out;
}

inline std::vector<PathSample> sample_gaussian(const CovKernel& k, std::span<const double> times, std::size_t count,
                                               std::uint64_t seed) {
    require_grid(times);
    const auto flat = gaussian_joint_samples(k, times, count, seed);
    std::vector<PathSample> out(count);
    const std::size_t m = times.size();
    for (std::size_t r = 0; r < count; ++r) {
        out[r].times.assign(times.begin(), times.end());
        out[r].values.assign(flat.begin() + r * m, flat.begin() + (r + 1) * m);
        out[r].seed = derive_stream(seed, r);
    }
    return out;
}

// phi(x) = c e^{-a x} with c normalized so the averaged product identity
// (the "balance in the mean" condition) holds.
struct VolterraPhi {
    double a = 1.0;
    double c = 1.0;

    double operator()(double x) const { return c * std::exp(-a * x); }
};

// c = (1 - e^{-a}) / int_0^a e^{-u}(1-e^{-u}) du/u, by checked quadrature.
// The integrand extends continuously with value 1 at u = 0.
inline VolterraPhi volterra_constant(double a) {
    if (!(a > 0.0)) throw std::invalid_argument("volterra_constant: a must be > 0");
    auto g = [](double u) { return u == 0.0 ? 1.0 : std::exp(-u) * (1.0 - std::exp(-u)) / u; };
    const double denom = integrate_checked(g, 0.0, a, 1e-14 * std::max(a, 1.0), 1e-11);
    return {a, (1.0 - std::exp(-a)) / denom};
}

// |int_0^1 phi - int_0^1 int_0^1 phi(zx) phi(z) dz dx|, nested quadrature.
inline double volterra_eq2_residual(const VolterraPhi& phi) {
    auto f = [&phi](double x) { return phi(x); };
    const double lhs = adaptive_simpson(f, 0.0, 1.0, 1e-13);
    auto inner = [&phi](double x) {
        return adaptive_simpson([&phi, x](double z) { return phi(z * x) * phi(z); }, 0.0, 1.0, 1e-13);
    };
    const double rhs = adaptive_simpson(inner, 0.0, 1.0, 1e-12);
    return std::abs(lhs - rhs);
}

// Residual of the pointwise product identity phi(x) = int_0^1 phi(zx) phi(z) dz
// at a single probe x; nonzero for the exponential family above.
inline double volterra_eq3_violation(const std::function<double(double)>& phi, double x_probe) {
    if (!(x_probe > 0.0 && x_probe < 1.0)) throw std::invalid_argument("volterra_eq3_violation: x must be in (0,1)");
    const double integral =
        adaptive_simpson([&phi, x_probe](double z) { return phi(z * x_probe) * phi(z); }, 0.0, 1.0, 1e-13);
    return phi(x_probe) - integral;
}

inline double volterra_eq3_violation(const VolterraPhi& phi, double x_probe) {
    return volterra_eq3_violation([&phi](double x) { return phi(x); }, x_probe);
}

// Spliced Gaussian process on [0,1]: X_t = B_t for t <= 1/2 and
// X_t = B_{1/2} + (sqrt(2)-1) B_{t-1/2} for t > 1/2, one driving Brownian
// path per sample. Marginals are Brownian; the process is not.
inline std::vector<PathSample> weak_bm_path(std::span<const double> times, std::size_t count, std::uint64_t seed) {
    require_grid(times);
    if (times.back() > 1.0) throw std::domain_error("weak_bm_path: construction is validated on [0,1] only");

    // driving-path grid: all first-half times plus shifted second-half times
    std::set<double> pts;
    pts.insert(0.0);
    for (double t : times) {
        if (t <= 0.5) pts.insert(t);
        else {
            pts.insert(0.5);
            pts.insert(t - 0.5);
        }
    }
    std::vector<double> grid(pts.begin(), pts.end());
    std::vector<std::size_t> half_idx(times.size(), 0);
    std::vector<std::size_t> shift_idx(times.size(), 0);
    auto index_of = [&grid](double v) {
        return std::size_t(std::lower_bound(grid.begin(), grid.end(), v) - grid.begin());
    };
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] <= 0.5) half_idx[i] = index_of(times[i]);
        else {
            half_idx[i] = index_of(0.5);
            shift_idx[i] = index_of(times[i] - 0.5);
        }
    }

    const double coeff = std::sqrt(2.0) - 1.0;
    std::vector<PathSample> out(count);
    std::vector<double> b(grid.size());
    for (std::size_t r = 0; r < count; ++r) {
        Rng rng(derive_stream(seed, r));
        b[0] = 0.0;
        for (std::size_t j = 1; j < grid.size(); ++j)
            b[j] = b[j - 1] + std::sqrt(grid[j] - grid[j - 1]) * rng.normal();
        auto& p = out[r];
        p.times.assign(times.begin(), times.end());
        p.values.resize(times.size());
        p.seed = derive_stream(seed, r);
        for (std::size_t i = 0; i < times.size(); ++i)
            p.values[i] = (times[i] <= 0.5) ? b[half_idx[i]] : b[half_idx[i]] + coeff * b[shift_idx[i]];
    }
    return out;
}

}  // namespace idt
