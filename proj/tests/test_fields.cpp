#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "idt/fields.hpp"
#include "idt/suites.hpp"

using namespace idt;

namespace {

double var_of(const std::vector<double>& xs) {
    double m = 0, v = 0;
    for (double x : xs) m += x;
    m /= double(xs.size());
    for (double x : xs) v += (x - m) * (x - m);
    return v / double(xs.size());
}

const std::vector<MultiIndex> kProbes = {{0.5, 1.0}, {1.5, 0.75}};

}  // namespace

TEST_CASE("field kernels: exact covariance values") {
    const auto sheet = FieldSpec::brownian_sheet(2);
    CHECK(field_kernel(sheet, {1.0, 2.0}, {2.0, 1.0}) == 1.0);
    CHECK(field_kernel(sheet, {1.0, 2.0}, {1.0, 2.0}) == 2.0);

    const auto lb = FieldSpec::levy_bm(2);
    CHECK(field_kernel(lb, {1.0, 0.0}, {0.0, 1.0}) == Catch::Approx((2.0 - std::numbers::sqrt2) / 2.0));

    const auto ps = FieldSpec::product_stable(2.0, 2);
    CHECK(field_kernel(ps, {1.0, 4.0}, {4.0, 1.0}) == Catch::Approx(4.0));
    CHECK_THROWS_AS(field_kernel(FieldSpec::product_stable(1.0, 2), {1.0, 1.0}, {1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("field sampling: variances and joint determinism") {
    const std::size_t n = 50000;
    const auto sum = FieldSpec::sum_levy({LevyModel::brownian(0, 1), LevyModel::brownian(0, 1)});
    const std::vector<MultiIndex> pt = {{2.0, 3.0}};
    const auto xs = sample_field(sum, pt, n, 3);
    CHECK(std::abs(var_of(xs) - 5.0) < 4.0 * 5.0 * std::sqrt(2.0 / double(n)));

    const auto again = sample_field(sum, pt, n, 3);
    CHECK(xs == again);

    const auto lb = FieldSpec::levy_bm(2);
    const std::vector<MultiIndex> two = {{1.0, 0.0}, {0.0, 1.0}};
    const auto flat = sample_field(lb, two, n, 4);
    double c = 0;
    for (std::size_t i = 0; i < n; ++i) c += flat[2 * i] * flat[2 * i + 1];
    CHECK(std::abs(c / double(n) - 0.29289321881) < 4.0 * std::sqrt(2.0 / double(n)));

    CHECK_THROWS_AS(sample_field(sum, std::vector<MultiIndex>{{1.0}}, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_field(sum, pt, 0, 1), std::invalid_argument);
}

TEST_CASE("gaussian type-2 kernels scale linearly under a common factor") {
    // c(a s, a t) = a c(s, t) exactly, for the isotropic Brownian field and
    // the alpha=2 product field
    const std::vector<MultiIndex> pts = {{0.5, 1.0}, {1.5, 0.75}, {2.0, 0.1}, {1.0, 1.0}};
    for (const auto& spec : {FieldSpec::levy_bm(2), FieldSpec::product_stable(2.0, 2)}) {
        for (double a : {0.5, 2.0, 3.7}) {
            for (const auto& s : pts)
                for (const auto& t : pts) {
                    MultiIndex as(s), at(t);
                    for (auto& v : as) v *= a;
                    for (auto& v : at) v *= a;
                    REQUIRE(std::abs(field_kernel(spec, as, at) - a * field_kernel(spec, s, t)) < 1e-12);
                }
        }
    }
}

TEST_CASE("anisotropic covariance scaling check") {
    const auto sheet = FieldSpec::brownian_sheet(2);
    FieldKernel sheet_k = [&sheet](const MultiIndex& s, const MultiIndex& t) { return field_kernel(sheet, s, t); };
    const std::vector<std::pair<MultiIndex, MultiIndex>> pairs = {
        {{0.5, 1.0}, {1.0, 2.0}}, {{1.0, 1.0}, {2.0, 0.5}}, {{0.3, 2.0}, {0.9, 1.1}}};
    const auto ok = type1_cov_check(sheet_k, {2.0, 3.0}, pairs, 1e-12);
    CHECK(ok.pass);
    CHECK(ok.statistic == 0.0);

    const auto lb = FieldSpec::levy_bm(2);
    FieldKernel lb_k = [&lb](const MultiIndex& s, const MultiIndex& t) { return field_kernel(lb, s, t); };
    CHECK(!type1_cov_check(lb_k, {2.0, 1.0}, pairs, 1e-6).pass);  // anisotropic scaling fails
    // isotropic scaling (2,2) at degree delta = 4? the kernel is 1-homogeneous,
    // delta(2,2) = 4 requires two-homogeneity, so this fails too
    CHECK(!type1_cov_check(lb_k, {2.0, 2.0}, pairs, 1e-6).pass);

    FieldKernel zero = [](const MultiIndex&, const MultiIndex&) { return 0.0; };
    CHECK(type1_cov_check(zero, {2.0, 3.0}, pairs, 1e-12).pass);
}

TEST_CASE("type-1 and type-2 scaling identities separate the example fields") {
    McParams mc;
    mc.count = 30000;
    mc.seed = 5;
    CHECK(type1_idt_check(FieldSpec::brownian_sheet(2), {2, 3}, kProbes, mc).pass);
    CHECK(type1_idt_check(FieldSpec::product_stable(2.0, 2), {2, 2}, kProbes, mc).pass);
    CHECK(!type1_idt_check(FieldSpec::sum_levy({LevyModel::brownian(0, 1), LevyModel::brownian(0, 1)}), {2, 1}, kProbes,
                           mc)
               .pass);

    CHECK(type2_idt_check(FieldSpec::sum_levy({LevyModel::brownian(0, 1), LevyModel::poisson_process(1, 1)}), 2,
                          kProbes, mc)
              .pass);
    CHECK(type2_idt_check(FieldSpec::levy_bm(2), 2, kProbes, mc).pass);
    CHECK(!type2_idt_check(FieldSpec::brownian_sheet(2), 2, kProbes, mc).pass);

    const auto inner = levy_idt_sampler(LevyModel::brownian(0, 1));
    CHECK(type1_idt_check(FieldSpec::from_idt(inner, 2), {2, 3}, kProbes, mc).pass);
    CHECK(type2_idt_check(FieldSpec::projection(inner, {1.0, 2.0}), 2, kProbes, mc).pass);

    CHECK_THROWS_AS(type2_idt_check(FieldSpec::levy_bm(2), 4, kProbes, mc), std::invalid_argument);
}

TEST_CASE("marginal triplet combination") {
    const TripletField tf{{triplet_of(LevyModel::brownian(0, 1)), triplet_of(LevyModel::poisson_process(1, 1))}};
    const auto t23 = marginal_triplet(tf, {2.0, 3.0});
    CHECK(t23.gaussian_var == 2.0);
    CHECK(t23.drift_b == 0.0);
    REQUIRE(t23.jump_measure.kind == JumpKind::finite_atoms);
    CHECK(t23.jump_measure.atoms[0].rate == Catch::Approx(3.0));

    const auto zero = marginal_triplet(tf, {0.0, 0.0});
    CHECK(zero.gaussian_var == 0.0);
    CHECK(zero.jump_measure.kind == JumpKind::none);

    const auto e1 = marginal_triplet(tf, {1.0, 0.0});
    CHECK(e1.gaussian_var == 1.0);
    CHECK(e1.jump_measure.kind == JumpKind::none);

    CHECK_THROWS_AS(marginal_triplet(tf, {1.0}), std::invalid_argument);
    const TripletField heavy{{triplet_of(LevyModel::gamma_process(1, 1)), triplet_of(LevyModel::cauchy_process(1))}};
    CHECK_THROWS_AS(marginal_triplet(heavy, {1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("rectangle increments") {
    const auto sheet = FieldSpec::brownian_sheet(2);
    const auto zero = rect_increment(sheet, Rect{{0.5, 0.5}, {0.5, 1.0}}, 100, 1);
    for (double v : zero) CHECK(v == 0.0);

    const std::size_t n = 50000;
    const auto xs = rect_increment(sheet, Rect{{0.0, 0.0}, {1.0, 1.0}}, n, 2);
    CHECK(std::abs(var_of(xs) - 1.0) < 4.0 * std::sqrt(2.0 / double(n)));

    CHECK(suites::rect_ratio_coefficient(1.0) == Catch::Approx(1.0).margin(1e-15));
    CHECK(suites::rect_ratio_coefficient(0.5) == Catch::Approx(9.0).margin(1e-12));

    McParams mc;
    mc.count = 30000;
    mc.seed = 7;
    CHECK(suites::rect_ratio_ks(1.0, mc).pass);
    CHECK(!suites::rect_ratio_ks(0.5, mc).pass);
}

TEST_CASE("operator scaling with a diagonal exponent") {
    McParams mc;
    mc.count = 30000;
    mc.seed = 9;
    const double q[1] = {0.5};
    CHECK(operator_scaling_check(FieldSpec::sum_levy({LevyModel::brownian(0, 1), LevyModel::brownian(0, 1)}), q, 4.0,
                                 kProbes, mc)
              .pass);
    CHECK(operator_scaling_check(FieldSpec::levy_bm(2), q, 2.0, kProbes, mc).pass);
    CHECK(!operator_scaling_check(
               FieldSpec::sum_levy({LevyModel::poisson_process(1, 1), LevyModel::poisson_process(1, 1)}), q, 4.0,
               kProbes, mc)
               .pass);
    const double q2[2] = {0.5, 0.5};
    CHECK_THROWS_AS(operator_scaling_check(FieldSpec::levy_bm(2), q2, 2.0, kProbes, mc), std::invalid_argument);
}

TEST_CASE("subordination by independent chronometers") {
    McParams mc;
    mc.count = 30000;
    mc.seed = 11;
    const auto base = FieldSpec::sum_levy({LevyModel::brownian(0, 1), LevyModel::brownian(0, 1)});

    // deterministic clocks: Y(s) = V(c . s)
    const auto det = subordinate_type2(base, {LevyModel::brownian(0.7, 0.0), LevyModel::brownian(1.3, 0.0)});
    CHECK(type2_idt_check(det, 2, kProbes, mc).pass);
    const std::vector<MultiIndex> pt = {{1.0, 1.0}};
    const auto xs = sample_field(det, pt, 50000, 12);
    CHECK(std::abs(var_of(xs) - 2.0) < 4.0 * 2.0 * std::sqrt(2.0 / 50000.0));

    // half-stable clocks: coordinates become symmetric Cauchy of scale 1/sqrt(2)
    const auto sub = subordinate_type2(base, {LevyModel::stable(0.5, 1.0, true), LevyModel::stable(0.5, 1.0, true)});
    CHECK(type2_idt_check(sub, 2, kProbes, mc).pass);
    const auto ys = sample_field(sub, pt, 50000, 13);
    double c = 0;
    for (double y : ys) c += std::cos(y);
    CHECK(std::abs(c / 50000.0 - std::exp(-std::numbers::sqrt2)) < 3.0 * std::sqrt(2.0 / 50000.0));

    // a decreasing clock violates the chronometer contract at sampling time
    const auto bad = subordinate_type2(base, {LevyModel::brownian(-1.0, 0.0), LevyModel::brownian(1.0, 0.0)});
    CHECK_THROWS_WITH(sample_field(bad, pt, 10, 1), Catch::Matchers::ContainsSubstring("chronometer"));

    CHECK_THROWS_AS(subordinate_type2(FieldSpec::levy_bm(2), {LevyModel::brownian(1, 0), LevyModel::brownian(1, 0)}),
                    std::invalid_argument);
    CHECK_THROWS_AS(subordinate_type2(base, {LevyModel::brownian(1, 0)}), std::invalid_argument);
}

TEST_CASE("touching rectangles: dependence for the isotropic field, independence for the sheet") {
    McParams mc;
    mc.count = 30000;
    mc.seed = 15;
    const Rect r1{{0.0, 0.0}, {1.0, 1.0}};
    const Rect r2{{1.0, 0.0}, {2.0, 1.0}};
    const auto dep = suites::rect_independence_check(FieldSpec::levy_bm(2), r1, r2, mc);
    CHECK(!dep.pass);
    CHECK(std::stod(dep.metadata.at("correlation")) < -0.3);
    CHECK(suites::rect_independence_check(FieldSpec::brownian_sheet(2), r1, r2, mc).pass);
}
