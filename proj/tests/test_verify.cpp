#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "idt/constructions.hpp"
#include "idt/levy.hpp"
#include "idt/verify.hpp"

using namespace idt;

namespace {

std::vector<double> normal_draws(double sd, std::size_t n, std::uint64_t seed) {
    Rng r(seed);
    std::vector<double> xs(n);
    for (auto& x : xs) x = sd * r.normal();
    return xs;
}

}  // namespace

TEST_CASE("verdict invariant: pass iff statistic <= threshold") {
    CHECK(VerdictReport::make("a", 0.5, 1.0).pass);
    CHECK(VerdictReport::make("b", 1.0, 1.0).pass);
    CHECK(!VerdictReport::make("c", 1.1, 1.0).pass);
    auto r = VerdictReport::make("root", 0.0, 1.0);
    r.absorb(VerdictReport::make("child", 2.0, 1.0));
    CHECK(!r.pass);
    const auto j = r.to_json();
    CHECK(j["name"] == "root");
    CHECK(j["sub"][0]["pass"] == false);
}

TEST_CASE("empirical characteristic distance: null and alternative") {
    const std::size_t n = 20000;
    auto a = EmpiricalLaw::scalar(normal_draws(1.0, n, 1));
    auto same = a;
    const auto zero = ecf_distance(a, same, default_lambda_grid(a, same));
    CHECK(zero.statistic == 0.0);
    CHECK(zero.pass);

    auto b = EmpiricalLaw::scalar(normal_draws(1.0, n, 2));
    CHECK(ecf_distance(a, b, default_lambda_grid(a, b)).pass);

    // N(0,1) vs N(0,2) at lambda = 1: |e^{-1/2} - e^{-1}| = 0.2387
    auto wide = EmpiricalLaw::scalar(normal_draws(std::numbers::sqrt2, n, 3));
    const double lam1[1] = {1.0};
    const auto diff = ecf_distance(a, wide, lam1);
    CHECK(!diff.pass);
    CHECK(diff.statistic == Catch::Approx(0.2387).margin(0.02));

    auto tiny = EmpiricalLaw::scalar(normal_draws(1.0, 10, 4));
    CHECK_THROWS_AS(ecf_distance(tiny, tiny, default_lambda_grid(tiny, tiny)), std::invalid_argument);
    CHECK_THROWS_AS(ecf_distance(a, b, std::vector<std::vector<double>>{}), std::invalid_argument);
}

TEST_CASE("power check: doubling identity for Brownian marginals") {
    const std::size_t n = 20000;
    auto a = EmpiricalLaw::scalar(sample_marginal(LevyModel::brownian(0, 1), 2.0, n, 5));
    auto b = EmpiricalLaw::scalar(sample_marginal(LevyModel::brownian(0, 1), 1.0, n, 6));
    const auto r = ecf_power_check(a, b, 2, default_lambda_grid(a, b));
    CHECK(r.pass);
    // the b-side band carries the power-propagation factor n
    const double expected = 3.0 * std::sqrt(2.0) * (1.0 + 2.0) / std::sqrt(double(n));
    CHECK(r.threshold == Catch::Approx(expected));
    CHECK_THROWS_AS(ecf_power_check(a, b, 0, default_lambda_grid(a, b)), std::invalid_argument);
}

TEST_CASE("two-sample KS: null, shift alternative, contract errors") {
    const std::size_t n = 20000;
    auto a = EmpiricalLaw::scalar(normal_draws(1.0, n, 7));
    auto b = EmpiricalLaw::scalar(normal_draws(1.0, n, 8));
    CHECK(ks_two_sample(a, b).pass);

    auto same = a;
    CHECK(ks_two_sample(a, same).statistic == 0.0);

    auto shifted = EmpiricalLaw::scalar(normal_draws(1.0, n, 9));
    for (auto& x : shifted.samples) x += 0.2;
    const auto r = ks_two_sample(a, shifted);
    CHECK(!r.pass);
    CHECK(std::stod(r.metadata.at("p_value")) < 1e-6);

    auto joint = EmpiricalLaw::joint(std::vector<double>(2000, 0.0), 2);
    CHECK_THROWS_AS(ks_two_sample(joint, a), std::invalid_argument);
}

TEST_CASE("association composite") {
    McParams mc;
    mc.count = 20000;
    mc.seed = 10;
    auto bm = [](double t, std::size_t count, std::uint64_t seed) {
        return sample_marginal(LevyModel::brownian(0, 1), t, count, seed);
    };
    auto cauchy = [](double t, std::size_t count, std::uint64_t seed) {
        return sample_marginal(LevyModel::cauchy_process(1), t, count, seed);
    };
    const double ts[2] = {0.5, 1.0};
    CHECK(association_test(bm, bm, ts, mc).pass);
    const auto bad = association_test(bm, cauchy, ts, mc);
    CHECK(!bad.pass);
    REQUIRE(bad.sub.size() == 2);
}

TEST_CASE("decomposition composite and the c-range contract") {
    McParams mc;
    mc.count = 20000;
    mc.seed = 11;
    auto bm = [](double t, std::size_t count, std::uint64_t seed) {
        return sample_marginal(LevyModel::brownian(0, 1), t, count, seed);
    };
    const double cs[2] = {0.36, 0.75};
    CHECK(decomposition_test(bm, cs, 1.0, mc).pass);
    const double bad_c[1] = {1.0};
    CHECK_THROWS_AS(decomposition_test(bm, bad_c, 1.0, mc), std::invalid_argument);
}

TEST_CASE("reports are deterministic functions of the seed") {
    McParams mc;
    mc.count = 20000;
    mc.seed = 12;
    auto bm = [](double t, std::size_t count, std::uint64_t seed) {
        return sample_marginal(LevyModel::brownian(0, 1), t, count, seed);
    };
    const double ts[1] = {1.0};
    const auto r1 = association_test(bm, bm, ts, mc);
    const auto r2 = association_test(bm, bm, ts, mc);
    CHECK(r1.sub[0].statistic == r2.sub[0].statistic);
    CHECK(r1.to_json().dump() == r2.to_json().dump());
}

TEST_CASE("joint probes include mixed-sign directions") {
    auto a = EmpiricalLaw::joint(std::vector<double>(4000, 0.5), 2);
    const auto probes = default_joint_probes(a, a);
    REQUIRE(probes.size() == 5);
    bool mixed = false;
    for (const auto& p : probes) mixed = mixed || (p[0] * p[1] < 0.0);
    CHECK(mixed);
}
