#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "idt/rng.hpp"

namespace idt {

struct McParams {
    std::size_t count = 100000;
    std::uint64_t seed = 1;
};

// A batch of samples from one law. dim > 1 stores tuples row-major.
struct EmpiricalLaw {
    std::vector<double> samples;
    std::size_t dim = 1;
    std::string label;
    std::uint64_t seed = 0;

    std::size_t count() const { return dim == 0 ? 0 : samples.size() / dim; }
    std::span<const double> row(std::size_t i) const { return {samples.data() + i * dim, dim}; }

    static EmpiricalLaw scalar(std::vector<double> xs, std::string label_ = {}, std::uint64_t seed_ = 0) {
        EmpiricalLaw law;
        law.samples = std::move(xs);
        law.dim = 1;
        law.label = std::move(label_);
        law.seed = seed_;
        return law;
    }
    static EmpiricalLaw joint(std::vector<double> xs, std::size_t dim_, std::string label_ = {},
                              std::uint64_t seed_ = 0) {
        EmpiricalLaw law;
        law.samples = std::move(xs);
        law.dim = dim_;
        law.label = std::move(label_);
        law.seed = seed_;
        return law;
    }
};

// Outcome of one check. pass is defined as statistic <= threshold; detectors
// are represented by expecting pass == false at the suite level.
struct VerdictReport {
    std::string name;
    double statistic = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::map<std::string, std::string> metadata;
    std::vector<VerdictReport> sub;

    static VerdictReport make(std::string name_, double statistic_, double threshold_) {
        VerdictReport r;
        r.name = std::move(name_);
        r.statistic = statistic_;
        r.threshold = threshold_;
        r.pass = statistic_ <= threshold_;
        return r;
    }

    VerdictReport& meta(const std::string& key, const std::string& value) {
        metadata[key] = value;
        return *this;
    }
    VerdictReport& meta(const std::string& key, double value) {
        std::ostringstream os;
        os.precision(17);
        os << value;
        metadata[key] = os.str();
        return *this;
    }

    // Recomputes pass as the AND of this statistic and every sub-verdict.
    void absorb(VerdictReport child) {
        pass = pass && child.pass;
        sub.push_back(std::move(child));
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["name"] = name;
        j["statistic"] = statistic;
        j["threshold"] = threshold;
        j["pass"] = pass;
        if (!metadata.empty()) j["metadata"] = metadata;
        if (!sub.empty()) {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& s : sub) arr.push_back(s.to_json());
            j["sub"] = arr;
        }
        return j;
    }
};

inline std::complex<double> ecf(const EmpiricalLaw& law, std::span<const double> theta) {
    if (theta.size() != law.dim) throw std::invalid_argument("ecf: probe dimension mismatch");
    const std::size_t n = law.count();
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* x = law.samples.data() + i * law.dim;
        double dot = 0.0;
        for (std::size_t d = 0; d < law.dim; ++d) dot += theta[d] * x[d];
        re += std::cos(dot);
        im += std::sin(dot);
    }
    return {re / double(n), im / double(n)};
}

// Inverse median absolute value of the pooled samples; the default lambda
// grids are scaled by this so heavy tails are probed where the CF is alive.
inline double inverse_median_abs(const EmpiricalLaw& a, const EmpiricalLaw& b) {
    std::vector<double> mags;
    mags.reserve(a.samples.size() + b.samples.size());
    for (double v : a.samples) mags.push_back(std::abs(v));
    for (double v : b.samples) mags.push_back(std::abs(v));
    if (mags.empty()) return 1.0;
    const std::size_t mid = mags.size() / 2;
    std::nth_element(mags.begin(), mags.begin() + mid, mags.end());
    const double med = mags[mid];
    return (med > 1e-12 && std::isfinite(med)) ? 1.0 / med : 1.0;
}

inline std::vector<double> default_lambda_grid(const EmpiricalLaw& a, const EmpiricalLaw& b) {
    const double s = inverse_median_abs(a, b);
    return {0.25 * s, 0.5 * s, 1.0 * s, 2.0 * s, 4.0 * s};
}

// Pre-registered joint probes: 5 theta directions per pair of time points,
// scaled by the pooled inverse median. Mixed-sign directions are included so
// covariance mismatches move the statistic.
inline std::vector<std::vector<double>> default_joint_probes(const EmpiricalLaw& a, const EmpiricalLaw& b) {
    if (a.dim != 2) throw std::invalid_argument("default_joint_probes: dim 2 expected");
    const double s = inverse_median_abs(a, b);
    const double base[5][2] = {{1, 1}, {1, -1}, {2, -2}, {0.5, 0.5}, {3, -3}};
    std::vector<std::vector<double>> probes;
    for (const auto& p : base) probes.push_back({p[0] * s, p[1] * s});
    return probes;
}

namespace detail {

inline void require_counts(const EmpiricalLaw& a, const EmpiricalLaw& b) {
    if (a.count() < 1000 || b.count() < 1000)
        throw std::invalid_argument("ecf tests require sample counts >= 1e3");
}

inline std::string probe_string(const std::vector<std::vector<double>>& probes) {
    std::ostringstream os;
    os.precision(6);
    for (const auto& p : probes) {
        os << "(";
        for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
        os << ")";
    }
    return os.str();
}

}  // namespace detail

// Max over probes of |ecf_a - ecf_b|. The threshold is the deterministic CLT
// band 3*sqrt(2)*(1/sqrt(n_a)+1/sqrt(n_b)) valid for averages of unit-modulus
// variables.
inline VerdictReport ecf_distance(const EmpiricalLaw& a, const EmpiricalLaw& b,
                                  const std::vector<std::vector<double>>& probes, const std::string& name = "ecf_distance") {
    detail::require_counts(a, b);
    if (probes.empty()) throw std::invalid_argument("ecf_distance: empty probe grid");
    double worst = 0.0;
    for (const auto& p : probes) worst = std::max(worst, std::abs(ecf(a, p) - ecf(b, p)));
    const double band = 3.0 * std::sqrt(2.0) * (1.0 / std::sqrt(double(a.count())) + 1.0 / std::sqrt(double(b.count())));
    auto r = VerdictReport::make(name, worst, band);
    r.meta("n_a", double(a.count())).meta("n_b", double(b.count())).meta("probes", detail::probe_string(probes));
    if (!a.label.empty()) r.meta("law_a", a.label);
    if (!b.label.empty()) r.meta("law_b", b.label);
    r.meta("seed_a", double(a.seed)).meta("seed_b", double(b.seed));
    return r;
}

inline VerdictReport ecf_distance(const EmpiricalLaw& a, const EmpiricalLaw& b, std::span<const double> lams,
                                  const std::string& name = "ecf_distance") {
    std::vector<std::vector<double>> probes;
    for (double l : lams) probes.push_back({l});
    return ecf_distance(a, b, probes, name);
}

// Max over probes of |ecf_a - ecf_b^n|. Raising to the n-th power multiplies
// the estimation error of ecf_b by at most n on the unit disk
// (|z^n - w^n| <= n|z - w| for |z|,|w| <= 1), so b's band is inflated by n.
inline VerdictReport ecf_power_check(const EmpiricalLaw& a, const EmpiricalLaw& b, unsigned n,
                                     const std::vector<std::vector<double>>& probes,
                                     const std::string& name = "ecf_power_check") {
    detail::require_counts(a, b);
    if (n < 1) throw std::invalid_argument("ecf_power_check: n must be >= 1");
    if (probes.empty()) throw std::invalid_argument("ecf_power_check: empty probe grid");
    double worst = 0.0;
    for (const auto& p : probes) {
        const std::complex<double> fa = ecf(a, p);
        const std::complex<double> fb = std::pow(ecf(b, p), double(n));
        worst = std::max(worst, std::abs(fa - fb));
    }
    const double band =
        3.0 * std::sqrt(2.0) * (1.0 / std::sqrt(double(a.count())) + double(n) / std::sqrt(double(b.count())));
    auto r = VerdictReport::make(name, worst, band);
    r.meta("n_fold", double(n)).meta("n_a", double(a.count())).meta("n_b", double(b.count()));
    r.meta("probes", detail::probe_string(probes));
    r.meta("seed_a", double(a.seed)).meta("seed_b", double(b.seed));
    return r;
}

inline VerdictReport ecf_power_check(const EmpiricalLaw& a, const EmpiricalLaw& b, unsigned n,
                                     std::span<const double> lams, const std::string& name = "ecf_power_check") {
    std::vector<std::vector<double>> probes;
    for (double l : lams) probes.push_back({l});
    return ecf_power_check(a, b, n, probes, name);
}

namespace detail {

// Kolmogorov tail Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
inline double kolmogorov_q(double lambda) {
    if (lambda < 1e-8) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * double(k) * double(k) * lambda * lambda);
        sum += sign * term;
        if (term < 1e-18) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace detail

// Two-sample Kolmogorov-Smirnov with the Stephens-corrected asymptotic
// p-value; pass iff p >= 0.01. statistic is the KS distance and threshold the
// matching critical distance, so pass <=> statistic <= threshold holds.
inline VerdictReport ks_two_sample(const EmpiricalLaw& a, const EmpiricalLaw& b, const std::string& name = "ks_two_sample") {
    if (a.dim != 1 || b.dim != 1) throw std::invalid_argument("ks_two_sample: scalar samples only");
    if (a.count() == 0 || b.count() == 0) throw std::invalid_argument("ks_two_sample: empty sample");
    std::vector<double> xs = a.samples, ys = b.samples;
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    const double n = double(xs.size()), m = double(ys.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < xs.size() && j < ys.size()) {
        const double v = std::min(xs[i], ys[j]);
        while (i < xs.size() && xs[i] <= v) ++i;
        while (j < ys.size() && ys[j] <= v) ++j;
        d = std::max(d, std::abs(double(i) / n - double(j) / m));
    }
    const double ne = std::sqrt(n * m / (n + m));
    const double corr = ne + 0.12 + 0.11 / ne;
    const double p = detail::kolmogorov_q(corr * d);

    // critical distance for p = 0.01 under the same correction
    double lo = 0.0, hi = 4.0;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (detail::kolmogorov_q(mid) >= 0.01 ? lo : hi) = mid;
    }
    const double d_crit = lo / corr;

    auto r = VerdictReport::make(name, d, d_crit);
    r.meta("p_value", p).meta("n_a", n).meta("n_b", m);
    if (!a.label.empty()) r.meta("law_a", a.label);
    if (!b.label.empty()) r.meta("law_b", b.label);
    r.meta("seed_a", double(a.seed)).meta("seed_b", double(b.seed));
    return r;
}

// Marginal sampler signature shared by the association and decomposition
// composites: (t, count, seed) -> samples.
using MarginalSampler = std::function<std::vector<double>(double, std::size_t, std::uint64_t)>;

// Per-t KS between two samplers; passes iff every sub-test passes.
inline VerdictReport association_test(const MarginalSampler& idt_side, const MarginalSampler& levy_side,
                                      std::span<const double> t_grid, const McParams& mc,
                                      const std::string& name = "association_test") {
    auto root = VerdictReport::make(name, 0.0, 0.0);
    root.pass = true;
    std::uint64_t k = 0;
    for (double t : t_grid) {
        const std::uint64_t sa = derive_stream(mc.seed, 2 * k);
        const std::uint64_t sb = derive_stream(mc.seed, 2 * k + 1);
        ++k;
        auto a = EmpiricalLaw::scalar(idt_side(t, mc.count, sa), "idt@t=" + std::to_string(t), sa);
        auto b = EmpiricalLaw::scalar(levy_side(t, mc.count, sb), "levy@t=" + std::to_string(t), sb);
        root.absorb(ks_two_sample(a, b, name + "/t=" + std::to_string(t)));
    }
    return root;
}

// X_t vs X_{ct} + X'_{(1-c)t} with independent draws, per c.
inline VerdictReport decomposition_test(const MarginalSampler& sampler, std::span<const double> cs, double t,
                                        const McParams& mc, const std::string& name = "decomposition_test") {
    auto root = VerdictReport::make(name, 0.0, 0.0);
    root.pass = true;
    std::uint64_t k = 0;
    for (double c : cs) {
        if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("decomposition_test: c must be in (0,1)");
        const std::uint64_t s0 = derive_stream(mc.seed, 3 * k);
        const std::uint64_t s1 = derive_stream(mc.seed, 3 * k + 1);
        const std::uint64_t s2 = derive_stream(mc.seed, 3 * k + 2);
        ++k;
        auto whole = sampler(t, mc.count, s0);
        auto part1 = sampler(c * t, mc.count, s1);
        auto part2 = sampler((1.0 - c) * t, mc.count, s2);
        for (std::size_t i = 0; i < part1.size(); ++i) part1[i] += part2[i];
        auto a = EmpiricalLaw::scalar(std::move(whole), "X_t", s0);
        auto b = EmpiricalLaw::scalar(std::move(part1), "X_ct+X'_(1-c)t", s1);
        root.absorb(ks_two_sample(a, b, name + "/c=" + std::to_string(c)));
    }
    return root;
}

}  // namespace idt
