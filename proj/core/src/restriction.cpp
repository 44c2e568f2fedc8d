#include "lab/restriction.hpp"

#include <algorithm>
#include <cmath>

namespace lab {

std::string to_string(BlockKind k) {
    switch (k) {
        case BlockKind::unit_interval: return "unit_interval";
        case BlockKind::dyadic: return "dyadic";
        case BlockKind::sqrt_window: return "sqrt_window";
    }
    return "unit_interval";
}

std::size_t node_floor(double block_length, double R, double m, double support_radius) {
    double cycles = block_length * R * (1.0 + m) * support_radius;
    return std::max<std::size_t>(8, std::size_t(8.0 * std::ceil(cycles)));
}

namespace {

// Midpoint value of int_a^b |mu_hat(freq(t))|^2 w(t) dt at a fixed node count.
template <typename FreqFn, typename WeightFn>
double block_pass(const AtomicMeasure& m, FreqFn freq, WeightFn weight, double a, double b,
                  std::size_t nodes) {
    double step = (b - a) / double(nodes);
    std::vector<Frequency> pts(nodes);
    for (std::size_t i = 0; i < nodes; ++i) pts[i] = freq(a + (double(i) + 0.5) * step);
    std::vector<Complex> vals = ft_batch(m, pts);
    KahanSum acc;
    for (std::size_t i = 0; i < nodes; ++i) {
        double t = a + (double(i) + 0.5) * step;
        acc.add(std::norm(vals[i]) * weight(t) * step);
    }
    return acc.value();
}

template <typename FreqFn, typename WeightFn>
BlockIntegral run_block(const AtomicMeasure& m, FreqFn freq, WeightFn weight, double a, double b,
                        double R, double gamma, BlockKind kind, std::size_t floor_nodes,
                        std::size_t quad_nodes) {
    if (quad_nodes == 0) quad_nodes = floor_nodes;
    if (quad_nodes < floor_nodes)
        throw PreconditionError("block integral: quad_nodes below the oversampling floor of " +
                                std::to_string(floor_nodes));
    double v1 = block_pass(m, freq, weight, a, b, quad_nodes);
    if (v1 == 0.0) {
        // All-cancellation block: one retry at 4x nodes before giving up.
        quad_nodes *= 4;
        v1 = block_pass(m, freq, weight, a, b, quad_nodes);
    }
    double v2 = block_pass(m, freq, weight, a, b, 2 * quad_nodes);
    BlockIntegral out;
    out.R = R;
    out.value = v1;
    out.gamma = gamma;
    out.kind = kind;
    out.quad_nodes = quad_nodes;
    out.doubling_change = v2 != 0.0 ? std::abs(v2 - v1) / std::abs(v2) : std::abs(v2 - v1);
    out.converged = out.doubling_change < 0.01;
    return out;
}

}  // namespace

BlockIntegral restriction_integral(const AtomicMeasure& m, const CurveSpec& curve, double R,
                                   std::size_t quad_nodes) {
    if (m.atoms.empty()) throw PreconditionError("restriction_integral: empty measure");
    if (!(R > 0.0)) throw PreconditionError("restriction_integral: R must be > 0");
    double sr = m.support_radius > 0.0 ? m.support_radius : support_radius(m);
    std::size_t floor_nodes = node_floor(1.0, R, curve.m(), sr);
    auto freq = [&](double t) { return curve.gamma(t) * R; };
    auto weight = [](double) { return 1.0; };
    return run_block(m, freq, weight, 1.0, 2.0, R, 0.0, BlockKind::unit_interval, floor_nodes,
                     quad_nodes);
}

BlockIntegral weighted_block(const AtomicMeasure& m, double p, double gamma, double R,
                             BlockKind kind, std::size_t quad_nodes) {
    if (m.atoms.empty()) throw PreconditionError("weighted_block: empty measure");
    if (!(p > 1.0)) throw PreconditionError("weighted_block: p must be > 1");
    if (!(R >= 2.0)) throw PreconditionError("weighted_block: R must be >= 2");
    double a, b;
    switch (kind) {
        case BlockKind::unit_interval: a = 1.0, b = 2.0; break;
        case BlockKind::dyadic: a = R, b = 2.0 * R; break;
        case BlockKind::sqrt_window: a = R, b = R + std::sqrt(R); break;
        default: throw PreconditionError("weighted_block: unknown block kind");
    }
    double sr = m.support_radius > 0.0 ? m.support_radius : support_radius(m);
    double m_scale = p * std::pow(R, p - 1.0);
    std::size_t floor_nodes = node_floor(b - a, 1.0, m_scale, sr);
    auto freq = [&](double t) { return Frequency{t, std::pow(t, p)}; };
    auto weight = [&](double t) { return std::pow(t, gamma); };
    return run_block(m, freq, weight, a, b, R, gamma, kind, floor_nodes, quad_nodes);
}

DecayFit fit_loglog(std::vector<std::pair<double, double>> xy) {
    if (xy.size() < 3) throw PreconditionError("fit: need at least 3 points");
    std::sort(xy.begin(), xy.end());
    for (std::size_t i = 1; i < xy.size(); ++i)
        if (xy[i].first == xy[i - 1].first)
            throw PreconditionError("fit: abscissae must be distinct");
    double n = double(xy.size());
    double sx = 0, sy = 0;
    for (auto [x, y] : xy) sx += x, sy += y;
    double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (auto [x, y] : xy) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    DecayFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    for (auto [x, y] : xy)
        fit.max_residual = std::max(fit.max_residual, std::abs(y - (fit.intercept + fit.slope * x)));
    fit.points = std::move(xy);
    return fit;
}

DecayFit fit_decay(std::vector<BlockIntegral> blocks) {
    std::vector<std::pair<double, double>> xy;
    xy.reserve(blocks.size());
    for (const BlockIntegral& b : blocks) {
        if (!(b.value > 0.0))
            throw PreconditionError(
                "fit_decay: nonpositive block value (all-cancellation block; rerun with more nodes)");
        xy.emplace_back(std::log(b.R), std::log(b.value));
    }
    return fit_loglog(std::move(xy));
}

DecayFit m_dependence_scan(const AtomicMeasure& m, double R, const std::vector<double>& m_values,
                           std::size_t quad_nodes) {
    if (m_values.size() < 3) throw PreconditionError("m_dependence_scan: need >= 3 m values");
    std::vector<std::pair<double, double>> xy;
    for (double mv : m_values) {
        if (!(mv >= 1.0)) throw PreconditionError("m_dependence_scan: m values must be >= 1");
        CurveSpec curve = CurveSpec::quadratic_scaled(mv);
        BlockIntegral block = restriction_integral(m, curve, R, quad_nodes);
        if (!(block.value > 0.0))
            throw PreconditionError("m_dependence_scan: nonpositive block value");
        xy.emplace_back(std::log(mv), std::log(block.value));
    }
    return fit_loglog(std::move(xy));
}

std::string to_string(Regime r) {
    switch (r) {
        case Regime::i: return "i";
        case Regime::ii: return "ii";
        case Regime::iii: return "iii";
    }
    return "i";
}

std::string to_string(Prediction p) {
    switch (p) {
        case Prediction::convergent: return "convergent";
        case Prediction::divergent_examples_exist: return "divergent_examples_exist";
        case Prediction::boundary: return "boundary";
    }
    return "boundary";
}

Regime regime_of(double alpha) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw PreconditionError("regime_of: alpha must lie in (0,2)");
    if (alpha > 1.0) return Regime::i;
    if (alpha > 0.5) return Regime::ii;
    return Regime::iii;
}

double boundary_gamma(double alpha, double p) {
    if (!(p > 1.0)) throw PreconditionError("boundary_gamma: p must be > 1");
    switch (regime_of(alpha)) {
        case Regime::i: return alpha * p - alpha / 2.0 - p;
        case Regime::ii: return -0.5;
        case Regime::iii: return alpha - 1.0;
    }
    return 0.0;
}

namespace {

// Anisotropic Cantor witness: the y axis is refined p times faster than the x
// axis so one depth serves both frequency scales t and t^p.
CantorSpec convergence_witness(double alpha, double p, int depth) {
    double ax = std::min(0.999, alpha * p / (p + 1.0));
    double ay = alpha - ax;
    if (!(ay > 0.0 && ay < 1.0))
        throw PreconditionError("threshold_experiment: no product witness for this (alpha, p)");
    CantorSpec spec;
    spec.branches_x = 2;
    spec.branches_y = 2;
    spec.ratio_x = std::pow(2.0, -1.0 / ax);
    spec.ratio_y = std::pow(2.0, -1.0 / ay);
    spec.depth = depth;
    return spec;
}

}  // namespace

ThresholdVerdict threshold_experiment(double alpha, double p, double gamma,
                                      const std::vector<double>& R_list,
                                      const ThresholdOptions& opts) {
    if (!(gamma > -1.0)) throw PreconditionError("threshold_experiment: gamma must be > -1");
    if (R_list.size() < 3) throw PreconditionError("threshold_experiment: need >= 3 R values");

    ThresholdVerdict v;
    v.alpha = alpha;
    v.p = p;
    v.gamma = gamma;
    v.regime = regime_of(alpha);
    double g_star = boundary_gamma(alpha, p);
    v.predicted = gamma < g_star - 1e-12   ? Prediction::convergent
                  : gamma > g_star + 1e-12 ? Prediction::divergent_examples_exist
                                           : Prediction::boundary;

    if (gamma < g_star - 1e-12) {
        // Convergent side: dyadic blocks of a fixed alpha-dimensional witness.
        AtomicMeasure witness =
            build_cantor_measure(convergence_witness(alpha, p, opts.cantor_depth), opts.atom_budget);
        for (double R : R_list)
            v.blocks.push_back(weighted_block(witness, p, gamma, R, BlockKind::dyadic));
    } else {
        // Sharpness side: a per-R sharp example. Regime ii has no construction
        // of its own; it is witnessed by case_i with alpha slightly above 1.
        double alpha_w = alpha;
        SharpCase cs = SharpCase::case_iii;
        if (alpha > 1.0) {
            cs = SharpCase::case_i;
        } else if (alpha > 0.5) {
            cs = SharpCase::case_i;
            alpha_w = opts.sharp_alpha_witness;
        }
        BlockKind kind = cs == SharpCase::case_i ? BlockKind::sqrt_window : BlockKind::dyadic;
        for (double R : R_list) {
            SharpExampleSpec spec;
            spec.p = p;
            spec.alpha = alpha_w;
            spec.R = R;
            spec.case_id = cs;
            spec.bump_order = opts.bump_order;
            spec.samples_per_bump = opts.samples_per_bump;
            SharpExample ex = build_sharp_example(spec, opts.atom_budget);
            v.blocks.push_back(weighted_block(ex.measure, p, gamma, R, kind));
        }
    }

    DecayFit fit = fit_decay(v.blocks);
    v.empirical_block_slope = fit.slope;
    v.observed = fit.slope >= opts.slope_flat_tol    ? Prediction::divergent_examples_exist
                 : fit.slope <= -opts.slope_flat_tol ? Prediction::convergent
                                                     : Prediction::boundary;
    return v;
}

}  // namespace lab
