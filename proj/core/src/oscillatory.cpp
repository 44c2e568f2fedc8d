#include "lab/oscillatory.hpp"

#include <algorithm>
#include <cmath>

#include "ft_kernel.hpp"

namespace lab {

Complex ft_atomic(const AtomicMeasure& m, Frequency xi, std::size_t chunk_size) {
    if (m.atoms.empty()) throw PreconditionError("ft_atomic: empty measure");
    detail::FtTable table(m.atoms);
    return detail::ft_eval(table, xi, chunk_size);
}

std::vector<Complex> ft_batch(const AtomicMeasure& m, const std::vector<Frequency>& points,
                              std::size_t chunk_size) {
    if (m.atoms.empty()) throw PreconditionError("ft_batch: empty measure");
    if (points.empty()) return {};
    detail::FtTable table(m.atoms);
    std::vector<Complex> out(points.size());
    parallel_for(points.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) out[i] = detail::ft_eval(table, points[i], chunk_size);
    });
    return out;
}

namespace {

// Composite midpoint value of int_a^b exp(-2 pi i (t xi1 + phi(t) xi2)) dt.
template <typename Phi>
Complex midpoint_pass(Phi&& phi, double a, double b, Frequency xi, std::size_t panels) {
    double step = (b - a) / double(panels);
    std::size_t workers = std::max<std::size_t>(1, thread_count());
    std::size_t stripe = (panels + workers - 1) / workers;
    std::vector<Complex> partial(workers, Complex(0.0, 0.0));
    parallel_for(panels, [&](std::size_t begin, std::size_t end) {
        KahanSum re, im;
        for (std::size_t i = begin; i < end; ++i) {
            double t = a + (double(i) + 0.5) * step;
            double u = t * xi.x + phi(t) * xi.y;
            double s, c;
            detail::sincos_turns(u, s, c);
            re.add(c);
            im.add(-s);
        }
        partial[begin / stripe] = Complex(re.value(), im.value());
    });
    Complex total(0.0, 0.0);
    for (const Complex& p : partial) total += p;
    return total * step;
}

// Panel-doubling midpoint quadrature with Richardson extrapolation; starts at
// >= 8 panels per oscillation period (rate = cycles per unit t).
template <typename Phi>
ArcFtResult oscillatory_integral(Phi&& phi, double a, double b, Frequency xi, double rate,
                                 double tol, std::size_t panel_budget) {
    auto panels = std::size_t(std::ceil(8.0 * ((b - a) * rate + 1.0)));
    panels = std::max<std::size_t>(panels, 8);

    Complex coarse = midpoint_pass(phi, a, b, xi, panels);
    while (true) {
        if (panels * 2 > panel_budget)
            throw ConvergenceError("oscillatory integral: tolerance not reached within the panel budget");
        panels *= 2;
        Complex fine = midpoint_pass(phi, a, b, xi, panels);
        double change = std::abs(fine - coarse);
        if (change <= tol) {
            // Midpoint rule is second order; Richardson of the two passes.
            return {fine + (fine - coarse) / 3.0, change / 3.0, panels};
        }
        coarse = fine;
    }
}

}  // namespace

ArcFtResult curve_arc_ft(const CurveSpec& curve, double a, double b, Frequency xi, double tol,
                         std::size_t panel_budget) {
    if (!(a >= 1.0 && b <= 2.0 && b > a))
        throw PreconditionError("curve_arc_ft: interval must be nondegenerate inside [1,2]");
    if (!(tol > 0.0)) throw PreconditionError("curve_arc_ft: tol must be > 0");
    double rate = std::abs(xi.x) + curve.m() * std::abs(xi.y);
    return oscillatory_integral([&](double t) { return curve.phi(t); }, a, b, xi, rate, tol,
                                panel_budget);
}

std::vector<VdcPoint> check_van_der_corput(const CurveSpec& curve,
                                           const std::vector<double>& xi2_values, double tol) {
    std::vector<VdcPoint> out;
    out.reserve(xi2_values.size());
    for (double xi2 : xi2_values) {
        if (!(xi2 >= 1.0))
            throw PreconditionError("check_van_der_corput: xi2 values must be >= 1");
        // lambda lives on the ray t >= 0, truncated at t = 2: the phase is
        // stationary at phi'(t) = 0, so the head [0,1] carries the x2^{-1/2}
        // bulk and the tail beyond 2 is O(1/(xi2 phi'(2))).
        Frequency xi{0.0, xi2};
        ArcFtResult head = oscillatory_integral([&](double t) { return curve.phi(t); }, 0.0, 1.0,
                                                xi, curve.m() * xi2, tol,
                                                std::size_t{1} << 24);
        ArcFtResult body = curve_arc_ft(curve, 1.0, 2.0, xi, tol);
        out.push_back({xi2, std::abs(head.value + body.value) * std::sqrt(xi2)});
    }
    return out;
}

}  // namespace lab
