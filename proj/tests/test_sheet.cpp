#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <vector>

#include "idt/sheet.hpp"
#include "idt/verify.hpp"

using namespace idt;

TEST_CASE("sheet boundary and determinism") {
    const std::vector<double> s = {0.0, 1.0, 2.0};
    const std::vector<double> t = {0.0, 0.5, 1.0, 1.5};
    const auto g = simulate_levy_sheet(LevyModel::brownian(0, 1), s, t, 42);
    for (std::size_t j = 0; j < t.size(); ++j) CHECK(g.at(0, j) == 0.0);
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(g.at(i, 0) == 0.0);
    const auto g2 = simulate_levy_sheet(LevyModel::brownian(0, 1), s, t, 42);
    CHECK(g.values == g2.values);

    const std::vector<double> bad = {0.0, 1.0, 1.0};
    CHECK_THROWS_AS(simulate_levy_sheet(LevyModel::brownian(0, 1), bad, t, 1), std::invalid_argument);
}

TEST_CASE("values are the inclusion-exclusion sums of the cell increments, bit for bit") {
    const std::vector<double> s = {0.0, 0.7, 1.4, 2.0};
    const std::vector<double> t = {0.0, 1.0, 2.5};
    const auto g = simulate_levy_sheet(LevyModel::gamma_process(1, 1), s, t, 7);
    const auto inc = detail::sheet_cell_increments(LevyModel::gamma_process(1, 1), s, t, 7);
    std::vector<double> rebuilt(s.size() * t.size(), 0.0);
    auto at = [&](std::size_t i, std::size_t j) -> double& { return rebuilt[i * t.size() + j]; };
    for (std::size_t i = 1; i < s.size(); ++i)
        for (std::size_t j = 1; j < t.size(); ++j)
            at(i, j) = at(i - 1, j) + at(i, j - 1) - at(i - 1, j - 1) + inc[(i - 1) * (t.size() - 1) + (j - 1)];
    REQUIRE(rebuilt.size() == g.values.size());
    CHECK(std::memcmp(rebuilt.data(), g.values.data(), rebuilt.size() * sizeof(double)) == 0);
}

TEST_CASE("brownian sheet variance grows with the rectangle area") {
    const std::vector<double> s = {0.0, 1.0, 2.0};
    const std::vector<double> t = {0.0, 1.5, 3.0};
    const std::size_t n = 40000;
    double v = 0;
    for (std::size_t r = 0; r < n; ++r) {
        const double x = simulate_levy_sheet(LevyModel::brownian(0, 1), s, t, derive_stream(1, r)).at(2, 2);
        v += x * x;
    }
    v /= double(n);
    CHECK(std::abs(v - 6.0) < 3.0 * 6.0 * std::sqrt(2.0 / double(n)));
}

TEST_CASE("sheet marginal at (1,1) matches the model marginal") {
    const std::vector<double> grid = {0.0, 0.5, 1.0};
    const std::size_t n = 20000;
    std::vector<double> vals(n);
    for (std::size_t r = 0; r < n; ++r)
        vals[r] = simulate_levy_sheet(LevyModel::poisson_process(1, 1), grid, grid, derive_stream(2, r)).at(2, 2);
    auto a = EmpiricalLaw::scalar(std::move(vals));
    auto b = EmpiricalLaw::scalar(sample_marginal(LevyModel::poisson_process(1, 1), 1.0, n, 3));
    CHECK(ks_two_sample(a, b).pass);
}

TEST_CASE("slices are one-parameter sections") {
    const std::vector<double> s = {0.0, 1.0, 2.0, 3.0};
    const std::vector<double> t = {0.0, 2.0};
    const auto g = simulate_levy_sheet(LevyModel::brownian(0, 1), s, t, 5);
    const auto zero_slice = sheet_slice(g, SheetAxis::s, 0);  // t = 0
    for (double v : zero_slice.values) CHECK(v == 0.0);
    const auto slice = sheet_slice(g, SheetAxis::s, 1);
    CHECK(slice.times == s);
    CHECK(slice.values[0] == 0.0);
    CHECK(slice.values[3] == g.at(3, 1));
    const auto tslice = sheet_slice(g, SheetAxis::t, 2);
    CHECK(tslice.times == t);
    CHECK(tslice.values[1] == g.at(2, 1));
    CHECK_THROWS_AS(sheet_slice(g, SheetAxis::s, 9), std::out_of_range);

    // terminal slice variance: Var L_{t s} = t * s
    const std::size_t n = 40000;
    double v = 0;
    for (std::size_t r = 0; r < n; ++r) {
        const auto sh = simulate_levy_sheet(LevyModel::brownian(0, 1), s, t, derive_stream(6, r));
        const double x = sheet_slice(sh, SheetAxis::s, 1).values[3];
        v += x * x;
    }
    v /= double(n);
    CHECK(std::abs(v - 6.0) < 3.0 * 6.0 * std::sqrt(2.0 / double(n)));
}

TEST_CASE("transposed sheets share their joint law; corrupted ones do not") {
    McParams mc;
    mc.count = 20000;
    mc.seed = 11;
    CHECK(transpose_law_check(LevyModel::brownian(0, 1), {1.0, 2.0}, {2.0, 2.0}, mc).pass);
    CHECK(transpose_law_check(LevyModel::poisson_process(1, 1), {1.0, 2.0}, {2.0, 2.0}, mc).pass);
    CHECK(!transpose_law_check(LevyModel::brownian(0, 1), {1.0, 2.0}, {2.0, 2.0}, mc, 1.1).pass);
}

TEST_CASE("1-stable selfsimilar sheet") {
    CHECK_THROWS_AS(simulate_sato_sheet_stable1(0.0, std::vector<double>{0.0, 1.0}, std::vector<double>{0.0, 1.0}, 1),
                    std::invalid_argument);
    const std::vector<double> grid = {0.0, 0.5, 1.0};
    const std::size_t n = 20000;
    std::vector<double> v11(n), v12(n), v11x2(n);
    for (std::size_t r = 0; r < n; ++r) {
        v11[r] = simulate_sato_sheet_stable1(1.0, grid, grid, derive_stream(21, r)).at(2, 2);
        const std::vector<double> t2 = {0.0, 1.0, 2.0};
        v12[r] = simulate_sato_sheet_stable1(1.0, grid, t2, derive_stream(22, r)).at(2, 2);
        v11x2[r] = 2.0 * simulate_sato_sheet_stable1(1.0, grid, grid, derive_stream(23, r)).at(2, 2);
    }
    auto a = EmpiricalLaw::scalar(std::move(v11));
    auto c = EmpiricalLaw::scalar(sample_marginal(LevyModel::cauchy_process(1.0), 1.0, n, 24));
    CHECK(ks_two_sample(a, c).pass);  // S(1,1) ~ Cauchy(1)
    auto d = EmpiricalLaw::scalar(std::move(v12));
    auto e = EmpiricalLaw::scalar(std::move(v11x2));
    CHECK(ecf_distance(d, e, default_lambda_grid(d, e)).pass);  // S(1,2t) ~ 2 S(1,t)
}
