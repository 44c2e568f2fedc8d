#pragma once

#include <vector>

#include "lab/common.hpp"
#include "lab/curve.hpp"
#include "lab/measures.hpp"
#include "lab/oscillatory.hpp"

namespace lab {

enum class BlockKind { unit_interval, dyadic, sqrt_window };

std::string to_string(BlockKind k);

struct BlockIntegral {
    double R = 0.0;
    double value = 0.0;
    double gamma = 0.0;
    BlockKind kind = BlockKind::unit_interval;
    std::size_t quad_nodes = 0;
    bool converged = false;      // node-doubling changed the value by < 1%
    double doubling_change = 0.0;
};

// Oversampled midpoint floor: 8 nodes per potential oscillation period of the
// integrand over the block.
std::size_t node_floor(double block_length, double R, double m, double support_radius);

// integral over [1,2] of |mu_hat(R gamma(t))|^2 dt. quad_nodes = 0 means "use
// the floor"; anything below the floor is rejected with the minimum named.
BlockIntegral restriction_integral(const AtomicMeasure& m, const CurveSpec& curve, double R,
                                   std::size_t quad_nodes = 0);

// integral over the block of |mu_hat(t, t^p)|^2 t^gamma dt, block one of
// [1,2] (unit_interval), [R,2R] (dyadic) or [R, R+sqrt(R)] (sqrt_window).
BlockIntegral weighted_block(const AtomicMeasure& m, double p, double gamma, double R,
                             BlockKind kind, std::size_t quad_nodes = 0);

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;
    std::vector<std::pair<double, double>> points;   // (log R, log value)
};

// OLS in log-log over the blocks, sorted by R. Requires >= 3 blocks with
// distinct R and positive values.
DecayFit fit_decay(std::vector<BlockIntegral> blocks);

DecayFit fit_loglog(std::vector<std::pair<double, double>> xy);   // generic helper

// Restriction integrals at fixed R across curves quadratic_scaled(m); returns
// the fit of log(value) against log(m). All m must be >= 1.
DecayFit m_dependence_scan(const AtomicMeasure& m, double R, const std::vector<double>& m_values,
                           std::size_t quad_nodes = 0);

enum class Regime { i, ii, iii };
enum class Prediction { convergent, divergent_examples_exist, boundary };

std::string to_string(Regime r);
std::string to_string(Prediction p);

// gamma threshold of the trichotomy: alpha*p - alpha/2 - p, -1/2, or alpha - 1.
double boundary_gamma(double alpha, double p);
Regime regime_of(double alpha);

struct ThresholdVerdict {
    double alpha = 0.0, p = 0.0, gamma = 0.0;
    Regime regime = Regime::i;
    Prediction predicted = Prediction::convergent;
    Prediction observed = Prediction::boundary;
    double empirical_block_slope = 0.0;
    std::vector<BlockIntegral> blocks;
};

struct ThresholdOptions {
    int cantor_depth = 6;             // witness resolution on the convergent side
    int samples_per_bump = 8;
    int bump_order = 2;
    double slope_flat_tol = 0.03;     // |slope| below this: "boundary"
    double sharp_alpha_witness = 1.05;  // regime ii sharpness witness (alpha = 1 + delta)
    std::size_t atom_budget = kDefaultAtomBudget;
};

// Convergent side (gamma below the boundary): dyadic blocks of an
// alpha-dimensional Cantor witness must decay. Sharpness side (gamma at or
// above the boundary): per-R sharp examples must hold level or grow.
ThresholdVerdict threshold_experiment(double alpha, double p, double gamma,
                                      const std::vector<double>& R_list,
                                      const ThresholdOptions& opts = {});

}  // namespace lab
