#pragma once

#include <functional>

#include "lab/common.hpp"

namespace lab {

// A parametrized arc gamma(t) = (t, phi(t)) on [1,2] with phi' and phi'' both
// comparable to the scale m (checked on a 1024-point grid at construction).
class CurveSpec {
  public:
    using Fn = std::function<double(double)>;

    CurveSpec(Fn phi, Fn phi_d1, Fn phi_d2, double m, double comparability = 8.0);

    double phi(double t) const { return phi_(t); }
    double phi_d1(double t) const { return phi_d1_(t); }
    double phi_d2(double t) const { return phi_d2_(t); }
    double m() const { return m_; }

    Vec2 gamma(double t) const { return {t, phi_(t)}; }

    // Measured derivative extremes over the validation grid.
    double max_d1() const { return max_d1_; }
    double min_d2() const { return min_d2_; }

    // phi(t) = t^2, m = 2.
    static CurveSpec parabola();
    // phi(t) = R^{p-1} t^p with m = R^{p-1}; the change of variables that turns
    // dyadic blocks of (t, t^p) into unit-interval restriction integrals.
    static CurveSpec power_rescaled(double p, double R);
    // phi(t) = m t^2/2 + m t/2; phi' = m(t + 1/2), phi'' = m. Used for m-scans.
    static CurveSpec quadratic_scaled(double m);

  private:
    Fn phi_, phi_d1_, phi_d2_;
    double m_;
    double max_d1_ = 0.0;
    double min_d2_ = 0.0;
};

}  // namespace lab
