#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "lab/measures.hpp"
#include "lab/oscillatory.hpp"

using namespace lab;

namespace {

double dist_to_segment(Vec2 p, Vec2 a, Vec2 b) {
    Vec2 d = b - a;
    double t = std::clamp((p - a).dot(d) / d.norm2(), 0.0, 1.0);
    return (p - (a + d * t)).norm();
}

}  // namespace

TEST_CASE("cantor: middle-thirds x {0}, depth 2, hand enumeration") {
    CantorSpec spec;
    spec.branches_x = 2, spec.ratio_x = 1.0 / 3.0;
    spec.branches_y = 1, spec.ratio_y = 1.0;
    spec.depth = 2;
    AtomicMeasure m = build_cantor_measure(spec);

    REQUIRE(m.atoms.size() == 4);
    std::vector<double> xs;
    for (const Atom& a : m.atoms) {
        CHECK(a.position.y == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(a.weight.real() == doctest::Approx(0.25).epsilon(1e-15));
        CHECK(a.weight.imag() == 0.0);
        xs.push_back(a.position.x);
    }
    std::sort(xs.begin(), xs.end());
    const double expected[4] = {-4.0 / 9.0, -2.0 / 9.0, 2.0 / 9.0, 4.0 / 9.0};
    for (int i = 0; i < 4; ++i) CHECK(xs[i] == doctest::Approx(expected[i]).epsilon(1e-14));
    CHECK(m.declared_alpha == doctest::Approx(std::log(2.0) / std::log(3.0)).epsilon(1e-12));
    CHECK(m.atom_spacing == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("cantor: 2x2 product at depth 1") {
    CantorSpec spec;   // defaults: 2 branches, ratio 1/3, both axes
    spec.depth = 1;
    AtomicMeasure m = build_cantor_measure(spec);

    REQUIRE(m.atoms.size() == 4);
    for (const Atom& a : m.atoms) {
        CHECK(std::abs(a.position.x) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
        CHECK(std::abs(a.position.y) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    }
    CHECK(m.declared_alpha == doctest::Approx(2.0 * std::log(2.0) / std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("cantor: spec validation and atom budget") {
    CantorSpec bad;
    bad.ratio_x = 0.6;   // > 1/branches
    CHECK_THROWS_AS(build_cantor_measure(bad), PreconditionError);

    CantorSpec big;
    big.depth = 10;
    CHECK_THROWS_AS(build_cantor_measure(big, 1000), ResourceError);
}

TEST_CASE("total_variation and support_radius") {
    AtomicMeasure m;
    m.atoms = {{{0.0, 0.0}, {1.0, 0.0}}, {{0.5, 0.0}, {-1.0, 0.0}}};
    CHECK(total_variation(m) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(support_radius(m) == doctest::Approx(0.5).epsilon(1e-15));

    AtomicMeasure empty;
    CHECK_THROWS_AS(total_variation(empty), PreconditionError);

    CantorSpec spec;
    spec.depth = 4;
    CHECK(total_variation(build_cantor_measure(spec)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("audit: single atom, alpha 1, r = 1/2 gives ratio 2") {
    AtomicMeasure m;
    m.atoms = {{{0.0, 0.0}, {1.0, 0.0}}};
    m.support_radius = 0.0;
    m.atom_spacing = 1e-6;
    AuditPlan plan;
    plan.grid_dim = 2;
    DimensionReport r = audit_dimension(m, 1.0, {0.5}, plan);
    CHECK(r.worst_ratio == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("audit: uniform grid measure at alpha 2 stays below 4 pi") {
    CantorSpec spec;
    spec.branches_x = spec.branches_y = 32;
    spec.ratio_x = spec.ratio_y = 1.0 / 32.0;
    spec.depth = 1;
    AtomicMeasure m = build_cantor_measure(spec);
    DimensionReport r = audit_dimension(m, 2.0, default_audit_radii(m));
    CHECK(r.worst_ratio <= 4.0 * 3.14159265358979);
}

TEST_CASE("audit: radii below atom spacing are rejected") {
    CantorSpec spec;
    spec.depth = 2;
    AtomicMeasure m = build_cantor_measure(spec);
    CHECK_THROWS_AS(audit_dimension(m, 1.0, {m.atom_spacing / 4.0}), PreconditionError);
}

TEST_CASE("audit: cantor worst_ratio stable in depth (factor <= 8 over depths 1..5)") {
    CantorSpec spec;
    double lo = 1e300, hi = 0.0;
    for (int d = 1; d <= 5; ++d) {
        spec.depth = d;
        AtomicMeasure m = build_cantor_measure(spec);
        DimensionReport r = audit_dimension(m, m.declared_alpha, default_audit_radii(m));
        lo = std::min(lo, r.worst_ratio);
        hi = std::max(hi, r.worst_ratio);
    }
    CHECK(hi / lo <= 8.0);
}

TEST_CASE("sharp example: translate and strip counts") {
    SharpExampleSpec spec;
    spec.p = 2.0, spec.alpha = 1.5, spec.R = 256.0;
    spec.case_id = SharpCase::case_i;
    CHECK(spec.T() == 64);
    CHECK(spec.N() == 64);

    SharpExampleSpec c3;
    c3.p = 2.0, c3.alpha = 0.5, c3.R = 256.0;
    c3.case_id = SharpCase::case_iii;
    CHECK(c3.T() == 16);
    CHECK(c3.N() == 4096);
}

TEST_CASE("sharp example: psi_hat floor holds and T=1 reduces to one bump") {
    SharpExampleSpec spec;
    spec.p = 2.0, spec.alpha = 1.5, spec.R = 128.0;
    spec.case_id = SharpCase::case_i;
    SharpExample ex = build_sharp_example(spec);
    CHECK(ex.psi_hat_floor >= ex.psi_hat_required / 10.0);
    CHECK(ex.geometry.T == spec.T());

    // alpha -> 1+ forces T = 1: a single modulated bump, |mu_hat| = |psi_hat|.
    SharpExampleSpec one;
    one.p = 2.0, one.alpha = 1.01, one.R = 4.0;
    one.case_id = SharpCase::case_i;
    SharpExample single = build_sharp_example(one);
    CHECK(single.geometry.T == 1);
    Complex at_center = ft_atomic(single.measure, single.geometry.c_D);
    CHECK(std::abs(at_center) >= single.psi_hat_floor * 0.5);
}

TEST_CASE("sharp example: atoms hug the translate segment") {
    SharpExampleSpec spec;
    spec.p = 2.0, spec.alpha = 1.5, spec.R = 256.0;
    spec.case_id = SharpCase::case_i;
    SharpExample ex = build_sharp_example(spec);

    // D_dual sides are the reciprocals of D's sides.
    double dual_long = 1.0 / std::min(2.0 * ex.geometry.rect_D.half_long,
                                      2.0 * ex.geometry.rect_D.half_short);
    Vec2 seg_a = ex.geometry.v * (1.0 / double(ex.geometry.T));
    Vec2 seg_b = ex.geometry.v;
    for (const Atom& a : ex.measure.atoms)
        CHECK(dist_to_segment(a.position, seg_a, seg_b) <= 2.0 * dual_long);
}

TEST_CASE("sharp example: total variation O(1) across R") {
    for (SharpCase cs : {SharpCase::case_i, SharpCase::case_iii}) {
        SharpExampleSpec spec;
        spec.p = 2.0;
        spec.alpha = cs == SharpCase::case_i ? 1.5 : 0.4;
        spec.case_id = cs;
        double lo = 1e300, hi = 0.0;
        for (int k = 7; k <= 10; ++k) {
            spec.R = std::ldexp(1.0, k);
            double tv = total_variation(build_sharp_example(spec).measure);
            lo = std::min(lo, tv);
            hi = std::max(hi, tv);
        }
        CHECK(hi / lo <= 4.0);
    }
}

TEST_CASE("sharp example: doubling samples_per_bump moves mu_hat on D by < 1%") {
    SharpExampleSpec spec;
    spec.p = 2.0, spec.alpha = 1.5, spec.R = 256.0;
    spec.case_id = SharpCase::case_i;
    SharpExample coarse = build_sharp_example(spec);
    spec.samples_per_bump *= 2;
    SharpExample fine = build_sharp_example(spec);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const RotRect& D = coarse.geometry.rect_D;
    std::vector<Frequency> pts;
    for (int i = 0; i < 100; ++i)
        pts.push_back(D.from_frame({unif(rng) * D.half_long, unif(rng) * D.half_short}));
    std::vector<Complex> a = ft_batch(coarse.measure, pts);
    std::vector<Complex> b = ft_batch(fine.measure, pts);
    double worst_change = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        worst_change = std::max(worst_change, std::abs(a[i] - b[i]));
        scale = std::max(scale, std::abs(a[i]));
    }
    CHECK(worst_change < 0.01 * scale);
}

TEST_CASE("sharp example: alpha = 2 and bad cases rejected") {
    SharpExampleSpec spec;
    spec.alpha = 2.0;
    CHECK_THROWS_AS(build_sharp_example(spec), PreconditionError);

    SharpExampleSpec wrong_case;
    wrong_case.alpha = 0.4;
    wrong_case.case_id = SharpCase::case_i;   // case_i needs alpha > 1
    CHECK_THROWS_AS(build_sharp_example(wrong_case), PreconditionError);

    SharpExampleSpec spec_ok;
    spec_ok.alpha = 1.5, spec_ok.R = 1024.0;
    CHECK_THROWS_AS(build_sharp_example(spec_ok, 100), ResourceError);
}
