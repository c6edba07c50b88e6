// Acceptance battery: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Sample sizes, tolerances, and seeds are fixed here.

#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "idt/idt.hpp"

using namespace idt;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
    std::printf("criterion %2d: %s  %s\n", criterion, ok ? "PASS" : "FAIL", detail.c_str());
    if (!ok) ++g_failures;
}

double var_of(const std::vector<double>& xs) {
    double m = 0, v = 0;
    for (double x : xs) m += x;
    m /= double(xs.size());
    for (double x : xs) v += (x - m) * (x - m);
    return v / double(xs.size());
}

constexpr std::size_t kCount = 100000;
constexpr std::uint64_t kSeed = 20260810;  // pre-registered root seed

// ---------------------------------------------------------------------------

void criterion1_kernel_homogeneity() {
    const auto grid = suites::probe_grid_10x10();
    const double scales[3] = {0.5, 2.0, 3.0};
    bool ok = true;
    double worst = 0.0;
    for (double h : {0.25, 0.5, 0.7}) {
        const auto r = kernel_idt_check(fbm_rescaled_kernel(h), scales, grid, 1e-12);
        ok = ok && r.pass;
        worst = std::max(worst, r.statistic);
    }
    for (double a : {0.0, 0.25, 0.5}) {
        const auto r = kernel_idt_check(time_warp_kernel(a), scales, grid, 1e-12);
        ok = ok && r.pass;
        worst = std::max(worst, r.statistic);
    }
    const auto bad = kernel_idt_check(suites::minsq_kernel(), scales, grid, 1e-12);
    ok = ok && !bad.pass && bad.statistic >= 1.0;
    report(1, ok,
           "scaling kernels within 1e-12 (worst " + std::to_string(worst) + "); min^2 violation " +
               std::to_string(bad.statistic));
}

void criterion2_association() {
    McParams mc;
    mc.count = kCount;
    mc.seed = kSeed;
    const auto outcome = run_suite("association", mc);
    const auto leb = build_measure_mix(suites::measure_leb01(), LevyModel::brownian(0.0, 1.0));
    const double v = var_of(leb.idt.sample_at(1.0, kCount, derive_stream(kSeed, 77)));
    const double band = 3.0 * std::sqrt(2.0 * (1.0 / 9.0) / double(kCount));
    const bool var_ok = std::abs(v - 1.0 / 3.0) <= band;
    report(2, outcome.ok && var_ok,
           std::to_string(outcome.items - outcome.mismatches) + "/" + std::to_string(outcome.items) +
               " KS associations; Var(X_1)=" + std::to_string(v) + " vs 1/3 +- " + std::to_string(band));
}

void criterion3_exponent_mu() {
    const auto bm = LevyModel::brownian(0.0, 1.0);
    const auto leb = suites::measure_leb01();
    bool exact_ok = true;
    for (double lam : {0.5, 1.0, 2.0, 3.0}) {
        const auto v = exponent_mu(bm, leb, lam);
        exact_ok = exact_ok && std::abs(v.real() + lam * lam / 6.0) <= 1e-10 && std::abs(v.imag()) <= 1e-12;
    }
    for (const auto& m : {LevyModel::brownian(0.3, 2.0), LevyModel::poisson_process(1, 1),
                          LevyModel::compound_poisson(2.0, {{0.5, 1.0}}), LevyModel::gamma_process(2, 3),
                          LevyModel::cauchy_process(1.5), LevyModel::stable(1.5, 1.0),
                          LevyModel::stable(0.5, 1.0, true)}) {
        for (double a : {0.4, 1.7}) {
            const auto v = exponent_mu(m, MeasureHalfLine::dirac(a), 1.3);
            const auto w = a * levy_symbol(m, 1.3);
            exact_ok = exact_ok && std::abs(v - w) <= 1e-12 * std::max(1.0, std::abs(w));
        }
    }
    const auto pair = build_measure_mix(leb, bm);
    const auto law = EmpiricalLaw::scalar(pair.associated.sample(1.0, kCount, derive_stream(kSeed, 3)));
    const auto grid = suites::lambda_grid_for(law);
    const auto cf = suites::cf_match_report("eq8", law, [&](double l) { return std::exp(exponent_mu(bm, leb, l)); },
                                            grid);
    report(3, exact_ok && cf.pass,
           "exact transported exponents; empirical CF gap " + std::to_string(cf.statistic) + " <= " +
               std::to_string(cf.threshold));
}

void criterion4_levy_measure_mu() {
    const auto nu = JumpMeasureSpec::finite({{1.0, 1.0}});
    const double third = levy_measure_mu(nu, suites::measure_leb01(), [](double y) { return y * y; });
    bool ok = std::abs(third - 1.0 / 3.0) <= 1e-12;
    for (double a : {0.4, 1.0, 2.3}) {
        const double v = levy_measure_mu(nu, MeasureHalfLine::dirac(a), [](double y) { return y * y; });
        ok = ok && std::abs(v - a * 1.0) <= 1e-12 * std::max(1.0, a);
    }
    report(4, ok, "transported jump integral = " + std::to_string(third) + " (1/3 to 1e-12); dirac cases exact");
}

void criterion5_weak_ito() {
    McParams mc;
    mc.count = kCount;
    mc.seed = derive_stream(kSeed, 5);
    bool ok = true;
    std::string detail;
    struct Case {
        LevyModel model;
        C2Fn fn;
        double t;
    };
    const std::vector<Case> cases = {{LevyModel::brownian(0, 1), suites::fn_square(), 1.0},
                                     {LevyModel::brownian(1, 1), suites::fn_identity(), 2.0},
                                     {LevyModel::brownian(1, 1), suites::fn_cube(), 0.5},
                                     {LevyModel::poisson_process(1, 1), suites::fn_square(), 1.0}};
    for (const auto& c : cases) {
        const auto s = weak_ito_sides(c.model, c.fn, c.t, mc);
        const bool balanced = std::abs(s.lhs - s.rhs) <= s.lhs_half_width + s.rhs_half_width;
        ok = ok && balanced;
        if (!balanced) detail += " unbalanced:" + c.model.label() + "/" + c.fn.label;
    }
    const auto sp = weak_ito_sides(LevyModel::poisson_process(1, 1), suites::fn_square(), 1.0, mc);
    const double gap_band = sp.lhs_half_width + sp.rhs_half_width + 0.02;
    const bool gap_ok = sp.headline_available && std::abs(sp.headline_gap - 1.0) <= gap_band;
    ok = ok && gap_ok;
    report(5, ok,
           "triplet-form balanced on 4 cases; headline diagnostic gap " + std::to_string(sp.headline_gap) +
               " (expect 1.0 +- " + std::to_string(gap_band) + ")" + detail);
}

void criterion6_nfold_and_separation() {
    McParams mc;
    mc.count = kCount;
    mc.seed = derive_stream(kSeed, 6);
    bool ok = true;
    std::string detail;

    struct Variant {
        std::string name;
        IdtSampler sampler;
    };
    const std::vector<Variant> variants = {
        {"bm", levy_idt_sampler(LevyModel::brownian(0, 1))},
        {"measure_mix", build_measure_mix(suites::measure_d1_d2(), LevyModel::brownian(0, 1)).idt},
        {"sub_gaussian", build_sub_gaussian(1.0, suites::product_kernel()).idt},
    };
    std::uint64_t k = 0;
    for (const auto& v : variants)
        for (unsigned n : {2u, 3u}) {
            McParams sub = mc;
            sub.seed = derive_stream(mc.seed, ++k);
            const auto one = suites::nfold_marginal(v.sampler, n, 1.0, sub);
            sub.seed = derive_stream(mc.seed, 100 + k);
            const auto two = suites::nfold_joint(v.sampler, n, 0.5, 1.0, sub);
            ok = ok && one.pass && two.pass;
            if (!one.pass || !two.pass) detail += " fail:" + v.name + "/n=" + std::to_string(n);
        }

    // the spliced weak process: marginal identity holds, joint identity fails
    auto weak_items = suites::counterexamples_suite();
    VerdictReport one_time, two_time, cov;
    for (const auto& item : weak_items) {
        McParams sub = mc;
        sub.seed = derive_stream(mc.seed, 999);
        if (item.name == "counterexamples/weak_bm_one_time") one_time = item.run(sub);
        if (item.name == "counterexamples/weak_bm_two_time") two_time = item.run(sub);
        if (item.name == "counterexamples/weak_bm_cov_scaling") cov = item.run(sub);
    }
    const double cov_half_1 = std::stod(cov.metadata.at("cov(1/2,1)"));
    const bool weak_ok = one_time.pass && !two_time.pass && !cov.pass &&
                         std::abs(cov_half_1 - std::numbers::sqrt2 / 2.0) < 0.02 &&
                         std::abs(cov.statistic - 0.207) < 0.03;
    ok = ok && weak_ok;
    report(6, ok,
           "n-fold one-/two-time identities hold; spliced process: one-time pass, two-time fail, cov violation " +
               std::to_string(cov.statistic) + " (expect ~0.207)" + detail);
}

void criterion7_decomposition() {
    McParams mc;
    mc.count = kCount;
    mc.seed = derive_stream(kSeed, 7);
    const double cs[3] = {0.25, 0.5, 0.75};
    const auto bm = levy_idt_sampler(LevyModel::brownian(0, 1));
    const auto ti = build_time_inversion(1.0);
    const auto sg = build_sub_gaussian(1.0, suites::product_kernel());
    const auto r1 = decomposition_test(bm.marginal(), cs, 1.0, mc, "bm");
    McParams m2 = mc;
    m2.seed = derive_stream(mc.seed, 1);
    const auto r2 = decomposition_test(ti.idt.marginal(), cs, 1.0, m2, "time_inversion");
    McParams m3 = mc;
    m3.seed = derive_stream(mc.seed, 2);
    const auto r3 = decomposition_test(sg.idt.marginal(), cs, 1.0, m3, "sub_gaussian");
    report(7, r1.pass && r2.pass && r3.pass, "X_t ~ X_ct + X'_(1-c)t KS for c in {0.25,0.5,0.75} on 3 constructions");
}

void criterion8_multiparameter_separations() {
    McParams mc;
    mc.count = kCount;
    mc.seed = derive_stream(kSeed, 8);
    const std::vector<MultiIndex> probes = {{0.5, 1.0}, {1.5, 0.75}};

    const auto sheet_t1 = type1_idt_check(FieldSpec::brownian_sheet(2), {2, 3}, probes, mc);
    McParams m2 = mc;
    m2.seed = derive_stream(mc.seed, 1);
    const auto sheet_t2 = type2_idt_check(FieldSpec::brownian_sheet(2), 2, probes, m2);
    McParams m3 = mc;
    m3.seed = derive_stream(mc.seed, 2);
    const auto lb_t2 = type2_idt_check(FieldSpec::levy_bm(2), 2, probes, m3);
    McParams m4 = mc;
    m4.seed = derive_stream(mc.seed, 3);
    const double q[1] = {0.5};
    const auto lb_scale = operator_scaling_check(FieldSpec::levy_bm(2), q, 2.0, probes, m4);
    const auto lb = FieldSpec::levy_bm(2);
    FieldKernel lb_k = [&lb](const MultiIndex& s, const MultiIndex& t) { return field_kernel(lb, s, t); };
    const std::vector<std::pair<MultiIndex, MultiIndex>> pairs = {
        {{0.5, 1.0}, {1.0, 2.0}}, {{1.0, 1.0}, {2.0, 0.5}}, {{0.3, 2.0}, {0.9, 1.1}}};
    const auto lb_aniso = type1_cov_check(lb_k, {2.0, 1.0}, pairs, 1e-6);
    McParams m5 = mc;
    m5.seed = derive_stream(mc.seed, 4);
    const auto rect_dep = suites::rect_independence_check(FieldSpec::levy_bm(2), Rect{{0, 0}, {1, 1}},
                                                          Rect{{1, 0}, {2, 1}}, m5);
    const bool ok = sheet_t1.pass && !sheet_t2.pass && lb_t2.pass && lb_scale.pass && !lb_aniso.pass && !rect_dep.pass;
    report(8, ok,
           "sheet: type1 pass/type2 fail; isotropic field: type2+scaling pass, anisotropic cov fail, rect corr " +
               rect_dep.metadata.at("correlation"));
}

void criterion9_rect_ratio() {
    const double c1 = suites::rect_ratio_coefficient(1.0);
    const double c05 = suites::rect_ratio_coefficient(0.5);
    McParams mc;
    mc.count = kCount;
    mc.seed = derive_stream(kSeed, 9);
    const auto pass1 = suites::rect_ratio_ks(1.0, mc);
    McParams m2 = mc;
    m2.seed = derive_stream(mc.seed, 1);
    const auto fail05 = suites::rect_ratio_ks(0.5, m2);
    const bool ok = std::abs(c1 - 1.0) <= 1e-15 && std::abs(c05 - 9.0) <= 1e-12 && pass1.pass && !fail05.pass;
    report(9, ok,
           "coefficient 4^{1/a}+1-2*2^{1/a}: " + std::to_string(c1) + " at a=1, " + std::to_string(c05) +
               " at a=1/2; KS pass/fail accordingly");
}

void criterion10_marginal_triplet_cf() {
    McParams mc;
    mc.count = kCount;
    mc.seed = derive_stream(kSeed, 10);
    const TripletField tf{{triplet_of(LevyModel::brownian(0, 1)), triplet_of(LevyModel::poisson_process(1, 1))}};
    const auto trip = marginal_triplet(tf, {2.0, 3.0});
    const auto spec = FieldSpec::sum_levy({LevyModel::brownian(0, 1), LevyModel::poisson_process(1, 1)});
    const std::vector<MultiIndex> pt = {{2.0, 3.0}};
    const auto law = EmpiricalLaw::scalar(sample_field(spec, pt, mc.count, derive_stream(mc.seed, 1)));
    const auto grid = suites::lambda_grid_for(law);
    const auto r = suites::cf_match_report("triplet_cf", law,
                                           [&](double l) { return std::exp(triplet_symbol(trip, l)); }, grid);
    report(10, r.pass,
           "field CF at s=(2,3) matches the basis-triplet exponent at 5 lambdas (gap " + std::to_string(r.statistic) +
               ")");
}

void criterion11_subordination() {
    McParams mc;
    mc.count = kCount;
    mc.seed = derive_stream(kSeed, 11);
    const auto base = FieldSpec::sum_levy({LevyModel::brownian(0, 1), LevyModel::brownian(0, 1)});
    const auto sub = subordinate_type2(base, {LevyModel::stable(0.5, 1.0, true), LevyModel::stable(0.5, 1.0, true)});
    const std::vector<MultiIndex> probes = {{0.5, 1.0}, {1.5, 0.75}};
    const auto r = type2_idt_check(sub, 2, probes, mc);
    report(11, r.pass, "half-stable-subordinated Brownian pair passes the doubling identity");
}

void criterion12_calibration_and_determinism() {
    McParams mc;
    mc.count = 2000;  // determinism is structural; a small replay of every suite item suffices
    mc.seed = derive_stream(kSeed, 12);
    const auto run1 = run_suite("all", mc);
    const auto run2 = run_suite("all", mc);
    const bool deterministic = run1.report.to_json().dump() == run2.report.to_json().dump();

    const auto cal = run_calibration(100, 20000);
    std::size_t worst = 0;
    for (const auto& item : cal.report.sub) worst = std::max(worst, std::size_t(item.statistic));
    report(12, deterministic && cal.ok,
           std::string("replayed suite is byte-identical; calibration: every item as-expected >= ") +
               std::to_string(100 - worst) + "/100 across " + std::to_string(cal.items) + " items");
}

}  // namespace

int main() {
    std::printf("acceptance battery: n=%zu, root seed %llu\n", kCount, (unsigned long long)kSeed);
    criterion1_kernel_homogeneity();
    criterion2_association();
    criterion3_exponent_mu();
    criterion4_levy_measure_mu();
    criterion5_weak_ito();
    criterion6_nfold_and_separation();
    criterion7_decomposition();
    criterion8_multiparameter_separations();
    criterion9_rect_ratio();
    criterion10_marginal_triplet_cf();
    criterion11_subordination();
    criterion12_calibration_and_determinism();
    std::printf("%s (%d criterion failures)\n", g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL", g_failures);
    return g_failures;
}
