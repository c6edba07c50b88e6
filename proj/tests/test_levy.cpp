#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "idt/fields.hpp"  // triplet_symbol
#include "idt/levy.hpp"
#include "idt/verify.hpp"

using namespace idt;

namespace {

std::vector<LevyModel> all_models() {
    return {LevyModel::brownian(0.4, 1.5),
            LevyModel::poisson_process(1.0, 1.0),
            LevyModel::compound_poisson(3.0, {{0.5, 0.7}, {-1.5, 0.3}}),
            LevyModel::gamma_process(2.0, 3.0),
            LevyModel::stable(1.5, 1.0),
            LevyModel::stable(0.5, 1.0, true),
            LevyModel::cauchy_process(2.0)};
}

double var_of(const std::vector<double>& xs) {
    double m = 0, v = 0;
    for (double x : xs) m += x;
    m /= double(xs.size());
    for (double x : xs) v += (x - m) * (x - m);
    return v / double(xs.size());
}

double mean_of(const std::vector<double>& xs) {
    double m = 0;
    for (double x : xs) m += x;
    return m / double(xs.size());
}

}  // namespace

TEST_CASE("levy symbol closed forms") {
    using namespace std::complex_literals;
    CHECK(levy_symbol(LevyModel::brownian(0, 1), 2.0) == std::complex<double>(-2.0, 0.0));
    const auto pois = levy_symbol(LevyModel::poisson_process(1, 1), std::numbers::pi);
    CHECK(pois.real() == Catch::Approx(-2.0).margin(1e-12));
    CHECK(pois.imag() == Catch::Approx(0.0).margin(1e-12));
    CHECK(levy_symbol(LevyModel::cauchy_process(1), -3.0).real() == Catch::Approx(-3.0));
    CHECK(levy_symbol(LevyModel::cauchy_process(1), -3.0).imag() == 0.0);
    // gamma: E e^{i l G_1} = (1 - i l / rate)^{-shape}
    const auto g = levy_symbol(LevyModel::gamma_process(2, 3), 1.2);
    const auto direct = -2.0 * std::log(1.0 - 1.2i / 3.0);
    CHECK(g.real() == Catch::Approx(direct.real()).margin(1e-13));
    CHECK(g.imag() == Catch::Approx(direct.imag()).margin(1e-13));
}

TEST_CASE("symbol symmetry and boundedness across all families") {
    for (const auto& m : all_models()) {
        CHECK(std::abs(levy_symbol(m, 0.0)) == 0.0);
        for (double lam : {0.3, 1.0, 2.7, -1.4}) {
            const auto p = levy_symbol(m, lam);
            const auto q = levy_symbol(m, -lam);
            CHECK(p.real() <= 1e-12);              // |E e^{i l L_1}| <= 1
            CHECK(q.real() == Catch::Approx(p.real()).margin(1e-12));
            CHECK(q.imag() == Catch::Approx(-p.imag()).margin(1e-12));
        }
    }
}

TEST_CASE("generating triplets of the finite-activity families are exact") {
    const auto tp = triplet_of(LevyModel::poisson_process(1.0, 1.0));
    CHECK(tp.drift_b == 0.0);  // jump size 1 is not compensated under |x|<1
    CHECK(tp.gaussian_var == 0.0);
    REQUIRE(tp.jump_measure.kind == JumpKind::finite_atoms);
    REQUIRE(tp.jump_measure.atoms.size() == 1);
    CHECK(tp.jump_measure.atoms[0].size == 1.0);
    CHECK(tp.jump_measure.atoms[0].rate == 1.0);

    const auto tb = triplet_of(LevyModel::brownian(0.5, 2.0));
    CHECK(tb.drift_b == 0.5);
    CHECK(tb.gaussian_var == 2.0);
    CHECK(tb.jump_measure.kind == JumpKind::none);

    const auto tc = triplet_of(LevyModel::compound_poisson(3.0, {{0.5, 1.0}}));
    CHECK(tc.drift_b == Catch::Approx(1.5));
    CHECK(tc.jump_measure.atoms[0].rate == Catch::Approx(3.0));
    CHECK(tc.jump_measure.atoms[0].size == 0.5);
}

TEST_CASE("triplet symbol agrees with the model symbol for every family") {
    // two independent algebraic routes to the characteristic exponent
    for (const auto& m : all_models()) {
        const auto trip = triplet_of(m);
        for (double lam : {0.5, 1.3, -2.0}) {
            const auto a = levy_symbol(m, lam);
            const auto b = triplet_symbol(trip, lam);
            CHECK(a.real() == Catch::Approx(b.real()).margin(1e-9));
            CHECK(a.imag() == Catch::Approx(b.imag()).margin(1e-9));
        }
    }
}

TEST_CASE("marginal sampling moments and determinism") {
    const std::size_t n = 100000;
    const auto bw = sample_marginal(LevyModel::brownian(0, 1), 4.0, n, 5);
    CHECK(std::abs(var_of(bw) - 4.0) < 3.0 * std::sqrt(2.0 * 16.0 / double(n)));

    const auto po = sample_marginal(LevyModel::poisson_process(1, 1), 2.0, n, 6);
    CHECK(std::abs(mean_of(po) - 2.0) < 3.0 * std::sqrt(2.0 / double(n)));

    auto st = sample_marginal(LevyModel::stable(1.0, 1.0), 3.0, n, 7);
    double c = 0;
    for (double x : st) c += std::cos(x);
    CHECK(std::abs(c / double(n) - std::exp(-3.0)) < 3.0 * std::sqrt(2.0 / double(n)));

    const auto z = sample_marginal(LevyModel::brownian(0, 1), 0.0, 10, 8);
    for (double v : z) CHECK(v == 0.0);

    CHECK(sample_marginal(LevyModel::brownian(0, 1), 1.0, 100, 9) ==
          sample_marginal(LevyModel::brownian(0, 1), 1.0, 100, 9));
    CHECK_THROWS_AS(sample_marginal(LevyModel::brownian(0, 1), 1.0, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_marginal(LevyModel::brownian(0, 1), -1.0, 10, 1), std::invalid_argument);
}

TEST_CASE("path simulation: boundary, monotone subordinators, grid checks") {
    const std::vector<double> grid = {0.0, 0.25, 0.5, 1.0};
    const auto p = simulate_path(LevyModel::brownian(0, 1), grid, 3);
    REQUIRE(p.values.size() == 4);
    CHECK(p.values[0] == 0.0);

    for (int s = 0; s < 50; ++s) {
        const auto g = simulate_path(LevyModel::gamma_process(1, 1), grid, std::uint64_t(s));
        for (std::size_t i = 1; i < g.values.size(); ++i) REQUIRE(g.values[i] >= g.values[i - 1]);
        const auto os = simulate_path(LevyModel::stable(0.5, 1.0, true), grid, std::uint64_t(s));
        for (std::size_t i = 1; i < os.values.size(); ++i) REQUIRE(os.values[i] >= os.values[i - 1]);
    }

    // compound poisson with unit atoms: terminal value Poisson(2)-distributed
    const std::vector<double> g3 = {0.0, 0.5, 1.0};
    double mean = 0;
    const int reps = 20000;
    for (int r = 0; r < reps; ++r)
        mean += simulate_path(LevyModel::compound_poisson(2.0, {{1.0, 1.0}}), g3, 1000 + std::uint64_t(r)).values.back();
    mean /= reps;
    CHECK(std::abs(mean - 2.0) < 4.0 * std::sqrt(2.0 / double(reps)));

    const std::vector<double> bad = {0.0, 0.5, 0.5};
    CHECK_THROWS_AS(simulate_path(LevyModel::brownian(0, 1), bad, 1), std::invalid_argument);
    const std::vector<double> not_zero = {0.5, 1.0};
    CHECK_THROWS_AS(simulate_path(LevyModel::brownian(0, 1), not_zero, 1), std::invalid_argument);

    // bit-identical replay
    const auto p1 = simulate_path(LevyModel::gamma_process(1, 1), grid, 77);
    const auto p2 = simulate_path(LevyModel::gamma_process(1, 1), grid, 77);
    CHECK(p1.values == p2.values);

    // refining the grid does not disturb values at coarse cells in law; the
    // first-cell stream only depends on the cell index
    const std::vector<double> fine = {0.0, 0.25, 0.5, 0.75, 1.0};
    const auto c1 = simulate_path(LevyModel::brownian(0, 1), grid, 123);
    const auto c2 = simulate_path(LevyModel::brownian(0, 1), fine, 123);
    CHECK(c1.values[1] == c2.values[1]);  // same first cell (0,0.25]
}

TEST_CASE("family validation") {
    CHECK_THROWS_AS(LevyModel::stable(2.0, 1.0), std::invalid_argument);  // use brownian_drift
    CHECK_THROWS_AS(LevyModel::stable(1.5, 1.0, true), std::invalid_argument);
    CHECK_THROWS_AS(LevyModel::poisson_process(-1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(LevyModel::compound_poisson(1.0, {{1.0, 0.5}}), std::invalid_argument);  // probs != 1
    CHECK_THROWS_AS(LevyModel::brownian(0.0, -1.0), std::invalid_argument);
    CHECK(has_finite_mean(LevyModel::stable(1.5, 1.0)));
    CHECK(!has_finite_mean(LevyModel::cauchy_process(1.0)));
    CHECK(!has_finite_mean(LevyModel::stable(0.5, 1.0, true)));
    CHECK(mean_rate(LevyModel::poisson_process(2.0, 1.5)) == Catch::Approx(3.0));
    CHECK(var_rate(LevyModel::gamma_process(2.0, 3.0)) == Catch::Approx(2.0 / 9.0));
}

TEST_CASE("marginal convolution identity through empirical characteristic functions") {
    const std::size_t n = 30000;
    for (const auto& m : {LevyModel::brownian(0.3, 1.0), LevyModel::gamma_process(1.0, 1.0),
                          LevyModel::cauchy_process(1.0)}) {
        for (unsigned nf : {2u, 5u}) {
            auto whole = sample_marginal(m, 0.6 * nf, n, 50 + nf);
            std::vector<double> sum(n, 0.0);
            for (unsigned j = 0; j < nf; ++j) {
                const auto part = sample_marginal(m, 0.6, n, derive_stream(99, j));
                for (std::size_t i = 0; i < n; ++i) sum[i] += part[i];
            }
            auto a = EmpiricalLaw::scalar(std::move(whole));
            auto b = EmpiricalLaw::scalar(std::move(sum));
            const auto r = ecf_distance(a, b, default_lambda_grid(a, b));
            INFO(m.label() << " n=" << nf);
            CHECK(r.pass);
        }
    }
}
