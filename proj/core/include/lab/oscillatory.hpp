#pragma once

#include <vector>

#include "lab/common.hpp"
#include "lab/curve.hpp"
#include "lab/measures.hpp"

namespace lab {

using Frequency = Vec2;

// Atoms summed in fixed chunks; each chunk is a plain vectorized sum, chunk
// partials are combined with compensated (Kahan) accumulation in chunk order.
// Results are a pure function of (measure, xi, chunk_size).
inline constexpr std::size_t kDefaultFtChunk = 4096;

// mu_hat(xi) = sum_j w_j exp(-2 pi i xi . x_j).
Complex ft_atomic(const AtomicMeasure& m, Frequency xi,
                  std::size_t chunk_size = kDefaultFtChunk);

// Elementwise ft_atomic, parallel over points, output order = input order.
std::vector<Complex> ft_batch(const AtomicMeasure& m, const std::vector<Frequency>& points,
                              std::size_t chunk_size = kDefaultFtChunk);

struct ArcFtResult {
    Complex value;
    double est_error = 0.0;
    std::size_t panels = 0;
};

// integral over [a,b] of exp(-2 pi i (t xi1 + phi(t) xi2)) dt by panel-doubling
// midpoint quadrature with Richardson extrapolation; starts at >= 8 panels per
// oscillation period.
ArcFtResult curve_arc_ft(const CurveSpec& curve, double a, double b, Frequency xi, double tol,
                         std::size_t panel_budget = (std::size_t{1} << 24));

struct VdcPoint {
    double xi2 = 0.0;
    double normalized = 0.0;   // |lambda_hat(0, xi2)| * xi2^{1/2}
};

// The van der Corput products for the arc measure dt on (t, phi(t)), t in [1,2].
std::vector<VdcPoint> check_van_der_corput(const CurveSpec& curve,
                                           const std::vector<double>& xi2_values,
                                           double tol = 1e-10);

}  // namespace lab
