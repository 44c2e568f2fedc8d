#include "lab/curve.hpp"

#include <cmath>
#include <string>

namespace lab {

CurveSpec::CurveSpec(Fn phi, Fn phi_d1, Fn phi_d2, double m, double comparability)
    : phi_(std::move(phi)), phi_d1_(std::move(phi_d1)), phi_d2_(std::move(phi_d2)), m_(m) {
    if (!(m >= 1.0)) throw PreconditionError("CurveSpec: m must be >= 1");
    if (!(comparability > 1.0)) throw PreconditionError("CurveSpec: comparability must be > 1");
    const int grid = 1024;
    double lo = 1.0 / comparability, hi = comparability;
    max_d1_ = 0.0;
    min_d2_ = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= grid; ++i) {
        double t = 1.0 + static_cast<double>(i) / grid;
        double d1 = phi_d1_(t) / m_;
        double d2 = phi_d2_(t) / m_;
        if (!(d1 >= lo && d1 <= hi) || !(d2 >= lo && d2 <= hi)) {
            throw PreconditionError("CurveSpec: phi'/m or phi''/m leaves [1/c0, c0] at t = " +
                                    std::to_string(t));
        }
        max_d1_ = std::max(max_d1_, phi_d1_(t));
        min_d2_ = std::min(min_d2_, phi_d2_(t));
    }
}

CurveSpec CurveSpec::parabola() {
    return CurveSpec([](double t) { return t * t; }, [](double t) { return 2.0 * t; },
                     [](double) { return 2.0; }, 2.0);
}

CurveSpec CurveSpec::power_rescaled(double p, double R) {
    if (!(p > 1.0)) throw PreconditionError("power_rescaled: p must be > 1");
    if (!(R >= 2.0)) throw PreconditionError("power_rescaled: R must be >= 2");
    double m = std::pow(R, p - 1.0);
    return CurveSpec([m, p](double t) { return m * std::pow(t, p); },
                     [m, p](double t) { return m * p * std::pow(t, p - 1.0); },
                     [m, p](double t) { return m * p * (p - 1.0) * std::pow(t, p - 2.0); }, m);
}

CurveSpec CurveSpec::quadratic_scaled(double m) {
    if (!(m >= 1.0)) throw PreconditionError("quadratic_scaled: m must be >= 1");
    return CurveSpec([m](double t) { return 0.5 * m * t * t + 0.5 * m * t; },
                     [m](double t) { return m * (t + 0.5); }, [m](double) { return m; }, m);
}

}  // namespace lab
