#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <random>

#include "lab/measures.hpp"
#include "lab/oscillatory.hpp"

using namespace lab;

namespace {

AtomicMeasure cantor_line(int depth) {
    CantorSpec spec;
    spec.branches_x = 2, spec.ratio_x = 1.0 / 3.0;
    spec.branches_y = 1, spec.ratio_y = 1.0;
    spec.depth = depth;
    return build_cantor_measure(spec);
}

}  // namespace

TEST_CASE("ft_atomic: single atom at the origin is identically 1") {
    AtomicMeasure m;
    m.atoms = {{{0.0, 0.0}, {1.0, 0.0}}};
    for (double x : {0.0, 1.0, -17.5, 4096.0}) {
        Complex v = ft_atomic(m, {x, 2.0 * x});
        CHECK(v.real() == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(v.imag() == doctest::Approx(0.0).epsilon(1e-15));
    }
    AtomicMeasure empty;
    CHECK_THROWS_AS(ft_atomic(empty, {1.0, 0.0}), PreconditionError);
}

TEST_CASE("ft_atomic: two-point symmetry gives cos(pi) = -1") {
    AtomicMeasure m;
    m.atoms = {{{-0.5, 0.0}, {0.5, 0.0}}, {{0.5, 0.0}, {0.5, 0.0}}};
    Complex v = ft_atomic(m, {1.0, 0.0});
    CHECK(v.real() == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(std::abs(v.imag()) < 1e-14);
}

TEST_CASE("ft_atomic: depth-3 cantor line vs 50-digit direct sum at xi = (3,0)") {
    using mp = boost::multiprecision::cpp_bin_float_50;
    AtomicMeasure m = cantor_line(3);
    REQUIRE(m.atoms.size() == 8);

    const mp two_pi = 2 * boost::math::constants::pi<mp>();
    mp re = 0, im = 0;
    for (const Atom& a : m.atoms) {
        mp phase = two_pi * 3 * mp(a.position.x);
        re += mp(a.weight.real()) * cos(phase);
        im -= mp(a.weight.real()) * sin(phase);
    }
    Complex v = ft_atomic(m, {3.0, 0.0});
    CHECK(v.real() == doctest::Approx(double(re)).epsilon(1e-13));
    CHECK(v.imag() == doctest::Approx(double(im)).epsilon(1e-13));
}

TEST_CASE("ft_batch: order, singleton, and 0-ulp match at chunk size 1") {
    AtomicMeasure m = cantor_line(4);
    CHECK(ft_batch(m, {}).empty());

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(-50.0, 50.0);
    std::vector<Frequency> pts;
    for (int i = 0; i < 1000; ++i) pts.push_back({unif(rng), unif(rng)});

    std::vector<Complex> batch = ft_batch(m, pts, 1);
    REQUIRE(batch.size() == pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        Complex single = ft_atomic(m, pts[i], 1);
        CHECK(batch[i].real() == single.real());   // bitwise
        CHECK(batch[i].imag() == single.imag());
    }
}

TEST_CASE("ft_batch: bitwise reproducible at the default chunk size") {
    CantorSpec spec;
    spec.depth = 6;
    AtomicMeasure m = build_cantor_measure(spec);
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> unif(-4096.0, 4096.0);
    std::vector<Frequency> pts;
    for (int i = 0; i < 64; ++i) pts.push_back({unif(rng), unif(rng)});

    std::vector<Complex> a = ft_batch(m, pts);
    std::vector<Complex> b = ft_batch(m, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(a[i].real() == b[i].real());
        CHECK(a[i].imag() == b[i].imag());
    }
}

TEST_CASE("ft invariants: conjugate symmetry and total-variation bound") {
    CantorSpec spec;
    spec.depth = 5;
    AtomicMeasure m = build_cantor_measure(spec);
    double tv = total_variation(m);

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unif(-1000.0, 1000.0);
    for (int i = 0; i < 10000; ++i) {
        Frequency xi{unif(rng), unif(rng)};
        Complex v = ft_atomic(m, xi);
        CHECK(std::abs(v) <= tv + 1e-12);
        if (i < 100) {
            Complex w = ft_atomic(m, -xi);
            CHECK(std::abs(w - std::conj(v)) < 1e-12);
        }
    }
}

TEST_CASE("ft invariants: modulation by e^{2 pi i x.h} translates the transform") {
    AtomicMeasure m = cantor_line(4);
    Vec2 h{3.25, -1.5};
    AtomicMeasure shifted = m;
    for (Atom& a : shifted.atoms) {
        double angle = kTwoPi * a.position.dot(h);
        a.weight *= Complex(std::cos(angle), std::sin(angle));
    }
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> unif(-100.0, 100.0);
    for (int i = 0; i < 200; ++i) {
        Frequency xi{unif(rng), unif(rng)};
        // ft(modulated, xi) = ft(original, xi - h)
        Complex lhs = ft_atomic(shifted, xi);
        Complex rhs = ft_atomic(m, xi - h);
        CHECK(std::abs(lhs - rhs) < 1e-10);
    }
}

TEST_CASE("curve_arc_ft: zero frequency integrates to the interval length") {
    CurveSpec curve = CurveSpec::parabola();
    ArcFtResult r = curve_arc_ft(curve, 1.0, 2.0, {0.0, 0.0}, 1e-12);
    CHECK(r.value.real() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::abs(r.value.imag()) < 1e-13);
}

TEST_CASE("curve_arc_ft: phi drops out at xi2 = 0 (closed form)") {
    CurveSpec curve = CurveSpec::parabola();
    double w = 3.7;
    ArcFtResult r = curve_arc_ft(curve, 1.0, 2.0, {w, 0.0}, 1e-12);
    Complex expected = (std::exp(Complex(0.0, -kTwoPi * w * 2.0)) -
                        std::exp(Complex(0.0, -kTwoPi * w))) /
                       Complex(0.0, -kTwoPi * w);
    CHECK(std::abs(r.value - expected) < 1e-10);
    CHECK(std::abs(r.value) <= 1.0 + 1e-12);
}

TEST_CASE("curve_arc_ft: xi = (0,64) against a 10^6-node dense midpoint oracle") {
    CurveSpec curve = CurveSpec::parabola();
    ArcFtResult r = curve_arc_ft(curve, 1.0, 2.0, {0.0, 64.0}, 1e-11);

    const int n = 1000000;
    KahanSum re, im;
    for (int i = 0; i < n; ++i) {
        double t = 1.0 + (i + 0.5) / n;
        double phase = kTwoPi * 64.0 * t * t;
        re.add(std::cos(phase) / n);
        im.add(-std::sin(phase) / n);
    }
    CHECK(std::abs(r.value - Complex(re.value(), im.value())) < 1e-8);
}

TEST_CASE("curve_arc_ft: a-posteriori error consistency and budget error") {
    CurveSpec curve = CurveSpec::parabola();
    double tol = 1e-8;
    ArcFtResult coarse = curve_arc_ft(curve, 1.0, 2.0, {5.0, 40.0}, tol);
    ArcFtResult fine = curve_arc_ft(curve, 1.0, 2.0, {5.0, 40.0}, tol / 2.0);
    CHECK(std::abs(coarse.value - fine.value) <= tol);

    CHECK_THROWS_AS(curve_arc_ft(curve, 1.0, 2.0, {0.0, 1e6}, 1e-14, 1 << 10),
                    ConvergenceError);
    CHECK_THROWS_AS(curve_arc_ft(curve, 0.5, 2.0, {0.0, 1.0}, 1e-8), PreconditionError);
    CHECK_THROWS_AS(curve_arc_ft(curve, 1.0, 2.0, {0.0, 1.0}, 0.0), PreconditionError);
}

TEST_CASE("curve spec: zero-curvature graphs fail the comparability gate") {
    CHECK_THROWS_AS(CurveSpec([](double t) { return t; }, [](double) { return 1.0; },
                              [](double) { return 0.0; }, 1.0),
                    PreconditionError);
}

TEST_CASE("van der corput: normalized products stay within the 4x band") {
    CurveSpec curve = CurveSpec::parabola();
    std::vector<double> xi2;
    for (int k = 4; k <= 8; ++k) xi2.push_back(std::ldexp(1.0, k));
    auto pts = check_van_der_corput(curve, xi2);
    REQUIRE(pts.size() == xi2.size());
    double lo = 1e300, hi = 0.0;
    for (const VdcPoint& q : pts) {
        lo = std::min(lo, q.normalized);
        hi = std::max(hi, q.normalized);
    }
    CHECK(hi / lo <= 4.0);

    CHECK_THROWS_AS(check_van_der_corput(curve, {0.0}), PreconditionError);
}
