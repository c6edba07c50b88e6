#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "idt/levy.hpp"
#include "idt/verify.hpp"

namespace idt {

// Two-parameter process on a rectangular grid. values is row-major with rows
// indexed by s_times; the zero row/column enforce the boundary condition.
struct SheetGrid {
    std::vector<double> s_times;
    std::vector<double> t_times;
    std::vector<double> values;  // s_times.size() x t_times.size()
    std::uint64_t seed = 0;

    double at(std::size_t i, std::size_t j) const { return values[i * t_times.size() + j]; }
    double& at(std::size_t i, std::size_t j) { return values[i * t_times.size() + j]; }
};

enum class SheetAxis { s, t };

namespace detail {

// Independent cell increments; cell (i,j) covers (s_{i-1},s_i] x (t_{j-1},t_j]
// and carries the law of L_{area}. Stream index = linear cell index.
inline std::vector<double> sheet_cell_increments(const LevyModel& model, std::span<const double> s_times,
                                                 std::span<const double> t_times, std::uint64_t seed) {
    const std::size_t ns = s_times.size(), nt = t_times.size();
    std::vector<double> inc((ns - 1) * (nt - 1), 0.0);
    for (std::size_t i = 1; i < ns; ++i)
        for (std::size_t j = 1; j < nt; ++j) {
            const std::size_t cell = (i - 1) * (nt - 1) + (j - 1);
            Rng rng(derive_stream(seed, cell));
            const double area = (s_times[i] - s_times[i - 1]) * (t_times[j] - t_times[j - 1]);
            inc[cell] = levy_increment(model, area, rng);
        }
    return inc;
}

// Same construction with all cell increments drawn sequentially from one
// caller-owned engine. Batch samplers use this when each replicate already
// holds a derived stream; the cell-law and aggregation are unchanged.
inline SheetGrid simulate_levy_sheet_seq(const LevyModel& model, std::span<const double> s_times,
                                         std::span<const double> t_times, Rng& rng) {
    require_grid(s_times);
    require_grid(t_times);
    SheetGrid g;
    g.s_times.assign(s_times.begin(), s_times.end());
    g.t_times.assign(t_times.begin(), t_times.end());
    const std::size_t ns = s_times.size(), nt = t_times.size();
    g.values.assign(ns * nt, 0.0);
    for (std::size_t i = 1; i < ns; ++i)
        for (std::size_t j = 1; j < nt; ++j) {
            const double area = (s_times[i] - s_times[i - 1]) * (t_times[j] - t_times[j - 1]);
            g.at(i, j) = g.at(i - 1, j) + g.at(i, j - 1) - g.at(i - 1, j - 1) + levy_increment(model, area, rng);
        }
    return g;
}

}  // namespace detail

// Sheet extending the given model: disjoint rectangles carry independent
// increments, the increment over a cell of area A has the law of L_A, and
// values are the inclusion-exclusion cumulative sums of the cell increments.
inline SheetGrid simulate_levy_sheet(const LevyModel& model, std::span<const double> s_times,
                                     std::span<const double> t_times, std::uint64_t seed) {
    model.validate();
    require_grid(s_times);
    require_grid(t_times);
    SheetGrid g;
    g.s_times.assign(s_times.begin(), s_times.end());
    g.t_times.assign(t_times.begin(), t_times.end());
    g.seed = seed;
    const std::size_t ns = s_times.size(), nt = t_times.size();
    g.values.assign(ns * nt, 0.0);
    const auto inc = detail::sheet_cell_increments(model, s_times, t_times, seed);
    for (std::size_t i = 1; i < ns; ++i)
        for (std::size_t j = 1; j < nt; ++j)
            g.at(i, j) = g.at(i - 1, j) + g.at(i, j - 1) - g.at(i - 1, j - 1) + inc[(i - 1) * (nt - 1) + (j - 1)];
    return g;
}

// One-parameter section along the requested axis at a fixed index of the other.
inline PathSample sheet_slice(const SheetGrid& sheet, SheetAxis axis, std::size_t index) {
    PathSample p;
    p.seed = sheet.seed;
    if (axis == SheetAxis::s) {
        // fixed t = t_times[index], varying s
        if (index >= sheet.t_times.size()) throw std::out_of_range("sheet_slice: t index out of range");
        p.times = sheet.s_times;
        p.values.resize(sheet.s_times.size());
        for (std::size_t i = 0; i < sheet.s_times.size(); ++i) p.values[i] = sheet.at(i, index);
    } else {
        if (index >= sheet.s_times.size()) throw std::out_of_range("sheet_slice: s index out of range");
        p.times = sheet.t_times;
        p.values.resize(sheet.t_times.size());
        for (std::size_t j = 0; j < sheet.t_times.size(); ++j) p.values[j] = sheet.at(index, j);
    }
    return p;
}

namespace detail {

// Joint replicated sheet values at two requested points, row-major count x 2.
// corrupt_scale multiplies the values (diagnostic hook for detector tests).
inline std::vector<double> sheet_pair_samples(const LevyModel& model, std::array<std::pair<double, double>, 2> pts,
                                              std::size_t count, std::uint64_t seed, double corrupt_scale = 1.0) {
    std::vector<double> s_times = {0.0}, t_times = {0.0};
    for (const auto& [s, t] : pts) {
        if (s > 0) s_times.push_back(s);
        if (t > 0) t_times.push_back(t);
    }
    auto uniq = [](std::vector<double>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    uniq(s_times);
    uniq(t_times);
    auto find = [](const std::vector<double>& v, double x) {
        return std::size_t(std::lower_bound(v.begin(), v.end(), x) - v.begin());
    };
    std::vector<double> out(count * 2);
    for (std::size_t r = 0; r < count; ++r) {
        const auto sheet = simulate_levy_sheet(model, s_times, t_times, derive_stream(seed, r));
        for (int k = 0; k < 2; ++k)
            out[r * 2 + k] = corrupt_scale * sheet.at(find(s_times, pts[k].first), find(t_times, pts[k].second));
    }
    return out;
}

}  // namespace detail

// Compares the joint law of (V(a,b), V(c,d)) against (V(b,a), V(d,c)) through
// empirical characteristic functions on the pre-registered probe directions.
inline VerdictReport transpose_law_check(const LevyModel& model, std::pair<double, double> p1,
                                         std::pair<double, double> p2, const McParams& mc,
                                         double corrupt_scale = 1.0) {
    const std::uint64_t sa = derive_stream(mc.seed, 11);
    const std::uint64_t sb = derive_stream(mc.seed, 12);
    const std::array<std::pair<double, double>, 2> straight{p1, p2};
    const std::array<std::pair<double, double>, 2> flipped{
        std::pair<double, double>{p1.second, p1.first}, std::pair<double, double>{p2.second, p2.first}};
    auto a = EmpiricalLaw::joint(detail::sheet_pair_samples(model, straight, mc.count, sa), 2, "sheet", sa);
    auto b = EmpiricalLaw::joint(detail::sheet_pair_samples(model, flipped, mc.count, sb, corrupt_scale), 2,
                                 "sheet_transposed", sb);
    return ecf_distance(a, b, default_joint_probes(a, b), "transpose_law_check[" + model.label() + "]");
}

// Sato sheet attached to a strictly 1-stable law. For strictly stable laws
// the 1-selfsimilar additive process coincides in law with the stable Levy
// process, so the sheet is realized as the Levy sheet of the symmetric
// 1-stable (Cauchy) model.
inline SheetGrid simulate_sato_sheet_stable1(double scale, std::span<const double> s_times,
                                             std::span<const double> t_times, std::uint64_t seed) {
    if (!(scale > 0.0)) throw std::invalid_argument("simulate_sato_sheet_stable1: scale must be > 0");
    return simulate_levy_sheet(LevyModel::cauchy_process(scale), s_times, t_times, seed);
}

}  // namespace idt
