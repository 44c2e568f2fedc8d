#include "lab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ft_kernel.hpp"

namespace lab {

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::cantor: return "cantor";
        case Provenance::sharp_example: return "sharp_example";
        case Provenance::custom: return "custom";
    }
    return "custom";
}

Provenance provenance_from_string(const std::string& s) {
    if (s == "cantor") return Provenance::cantor;
    if (s == "sharp_example") return Provenance::sharp_example;
    if (s == "custom") return Provenance::custom;
    throw ConfigError("unknown provenance tag: " + s);
}

double total_variation(const AtomicMeasure& m) {
    if (m.atoms.empty()) throw PreconditionError("total_variation: empty measure");
    KahanSum s;
    for (const Atom& a : m.atoms) s.add(std::abs(a.weight));
    return s.value();
}

double support_radius(const AtomicMeasure& m) {
    if (m.atoms.empty()) throw PreconditionError("support_radius: empty measure");
    double r = 0.0;
    for (const Atom& a : m.atoms) r = std::max(r, a.position.norm());
    return r;
}

Vec2 center_of_mass(const AtomicMeasure& m) {
    if (m.atoms.empty()) throw PreconditionError("center_of_mass: empty measure");
    KahanSum sx, sy, sw;
    for (const Atom& a : m.atoms) {
        double w = std::abs(a.weight);
        sx.add(w * a.position.x);
        sy.add(w * a.position.y);
        sw.add(w);
    }
    if (sw.value() <= 0.0) throw PreconditionError("center_of_mass: zero total variation");
    return {sx.value() / sw.value(), sy.value() / sw.value()};
}

double CantorSpec::implied_alpha() const {
    auto axis = [](int b, double r) { return b <= 1 ? 0.0 : std::log(double(b)) / std::log(1.0 / r); };
    return axis(branches_x, ratio_x) + axis(branches_y, ratio_y);
}

void CantorSpec::validate() const {
    if (branches_x < 1 || branches_y < 1) throw PreconditionError("CantorSpec: branches must be >= 1");
    if (depth < 1) throw PreconditionError("CantorSpec: depth must be >= 1");
    auto check_axis = [](int b, double r, const char* name) {
        if (!(r > 0.0) || !(r * b <= 1.0 + 1e-12))
            throw PreconditionError(std::string("CantorSpec: ") + name +
                                    " must satisfy 0 < ratio <= 1/branches");
    };
    check_axis(branches_x, ratio_x, "x axis");
    check_axis(branches_y, ratio_y, "y axis");
    double alpha = implied_alpha();
    if (!(alpha >= 0.0 && alpha <= 2.0 + 1e-12))
        throw PreconditionError("CantorSpec: implied dimension outside [0,2]");
}

namespace {

// Depth-level cell left edges on [0,1]; children spread evenly across the
// parent (for 2 branches of ratio 1/3 this is the middle-thirds placement).
std::vector<double> cantor_cell_starts(int branches, double ratio, int depth) {
    std::vector<double> starts{0.0};
    double len = 1.0;
    for (int d = 0; d < depth; ++d) {
        std::vector<double> next;
        next.reserve(starts.size() * branches);
        double child = len * ratio;
        double step = branches > 1 ? len * (1.0 - ratio) / (branches - 1) : 0.0;
        for (double s : starts)
            for (int i = 0; i < branches; ++i) next.push_back(s + i * step);
        starts = std::move(next);
        len = child;
    }
    return starts;
}

}  // namespace

AtomicMeasure build_cantor_measure(const CantorSpec& spec, std::size_t atom_budget) {
    spec.validate();
    double count = std::pow(double(spec.branches_x) * spec.branches_y, spec.depth);
    if (count > double(atom_budget))
        throw ResourceError("build_cantor_measure: " + std::to_string(count) +
                            " atoms exceed the budget of " + std::to_string(atom_budget));

    auto sx = cantor_cell_starts(spec.branches_x, spec.ratio_x, spec.depth);
    auto sy = cantor_cell_starts(spec.branches_y, spec.ratio_y, spec.depth);
    double cell_x = std::pow(spec.ratio_x, spec.depth);
    double cell_y = std::pow(spec.ratio_y, spec.depth);
    double w = 1.0 / (double(sx.size()) * double(sy.size()));

    AtomicMeasure m;
    m.atoms.reserve(sx.size() * sy.size());
    for (double ax : sx)
        for (double ay : sy)
            m.atoms.push_back({{ax + 0.5 * cell_x - 0.5, ay + 0.5 * cell_y - 0.5}, Complex(w, 0.0)});
    m.declared_alpha = spec.implied_alpha();
    m.support_radius = support_radius(m);
    m.provenance = Provenance::cantor;
    m.atom_spacing = std::min(cell_x, cell_y);
    return m;
}

void SharpExampleSpec::validate() const {
    if (!(p > 1.0)) throw PreconditionError("SharpExampleSpec: p must be > 1");
    if (!(alpha > 0.0 && alpha < 2.0))
        throw PreconditionError("SharpExampleSpec: alpha must lie in (0,2)");
    if (!(R >= 2.0)) throw PreconditionError("SharpExampleSpec: R must be >= 2");
    if (case_id == SharpCase::case_i && !(alpha > 1.0))
        throw PreconditionError("SharpExampleSpec: case_i requires alpha > 1");
    if (case_id == SharpCase::case_iii && !(alpha <= 0.5))
        throw PreconditionError("SharpExampleSpec: case_iii requires alpha <= 1/2");
    if (bump_order < 2) throw PreconditionError("SharpExampleSpec: bump_order must be >= 2");
    if (samples_per_bump < 8)
        throw PreconditionError("SharpExampleSpec: samples_per_bump must be >= 8");
}

long SharpExampleSpec::T() const {
    double t = case_id == SharpCase::case_i ? std::pow(R, (p - 0.5) * (alpha - 1.0))
                                            : std::pow(R, alpha);
    return std::max(1L, std::lround(t));
}

long SharpExampleSpec::N() const {
    double len = case_id == SharpCase::case_i ? std::pow(R, p - 0.5) : std::pow(R, p);
    return std::max(1L, std::lround(len / double(T())));
}

namespace {

// 1-D transform of the bump (1 - (x/h)^2)^q on [-h, h] at frequency f
// (cycles); real by symmetry, evaluated with a fine midpoint rule. The phase
// stays within a fraction of a cycle for every frequency we probe.
double bump_ft_1d(double h, int q, double f) {
    const int nodes = 2048;
    double step = 2.0 * h / nodes;
    KahanSum acc;
    for (int i = 0; i < nodes; ++i) {
        double x = -h + (i + 0.5) * step;
        double b = std::pow(1.0 - (x / h) * (x / h), q);
        acc.add(b * std::cos(kTwoPi * f * x) * step);
    }
    return acc.value();
}

}  // namespace

SharpExample build_sharp_example(const SharpExampleSpec& spec, std::size_t atom_budget) {
    spec.validate();
    const double p = spec.p, alpha = spec.alpha, R = spec.R;
    const bool case_i = spec.case_id == SharpCase::case_i;
    const long T = spec.T();
    const int spb = spec.samples_per_bump;

    if (double(T) * spb * spb > double(atom_budget))
        throw ResourceError("build_sharp_example: atom budget exceeded (T * samples_per_bump^2 = " +
                            std::to_string(double(T) * spb * spb) + ")");

    // Frequency-side rectangle D containing the arc, aligned to its chord.
    const double t_lo = R;
    const double t_hi = case_i ? R + std::sqrt(R) : 2.0 * R;
    const int M = 1024;
    std::vector<Vec2> arc(M + 1);
    for (int i = 0; i <= M; ++i) {
        double t = t_lo + (t_hi - t_lo) * i / M;
        arc[i] = {t, std::pow(t, p)};
    }
    Vec2 axis = (arc[M] - arc[0]).normalized();
    Vec2 normal = axis.perp();
    double lo_l = std::numeric_limits<double>::infinity(), hi_l = -lo_l;
    double lo_s = lo_l, hi_s = -lo_l;
    for (int i = 0; i <= M; ++i) {
        double l = arc[i].dot(axis), s = arc[i].dot(normal);
        lo_l = std::min(lo_l, l), hi_l = std::max(hi_l, l);
        lo_s = std::min(lo_s, s), hi_s = std::max(hi_s, s);
    }
    // Pad by the polyline's sagitta so the true arc stays inside the box, but
    // keep the box close to tight: inflating a side past the arc's actual
    // extent shrinks the dual (and hence psi_hat) by the same factor.  The
    // half-nominal floor keeps the dual -- the physical-side support of the
    // measure -- from growing past twice its nominal size, which would only
    // bloat the quadrature rate downstream.
    const double dt = (t_hi - t_lo) / M;
    const double pad = dt * dt * p * (p - 1.0) *
                           std::max(std::pow(t_lo, p - 2.0), std::pow(t_hi, p - 2.0)) / 8.0 +
                       1e-9 * (hi_l - lo_l);
    const double nominal_long = case_i ? std::pow(R, p - 0.5) : std::pow(R, p);
    const double nominal_short = case_i ? 1.0 : R;
    double side_long = std::max(hi_l - lo_l + 2.0 * pad, 0.5 * nominal_long);
    double side_short = std::max(hi_s - lo_s + 2.0 * pad, 0.5 * nominal_short);
    Vec2 c_D = axis * (0.5 * (lo_l + hi_l)) + normal * (0.5 * (lo_s + hi_s));

    DerivedGeometry geom;
    geom.rect_D = {c_D, axis, 0.5 * side_long, 0.5 * side_short};
    geom.v = axis;
    geom.c_D = c_D;
    geom.T = T;
    geom.N = spec.N();

    // D_dual: reciprocal sides, same axes, short axis along v.
    const double h_v = 0.5 / side_long;    // half-extent along v
    const double h_n = 0.5 / side_short;   // half-extent across v
    const double amplitude = case_i ? std::pow(R, (p - 0.5) * (2.0 - alpha))
                                    : std::pow(R, p + 1.0 - alpha);
    const int q = spec.bump_order;

    // psi_hat must dominate the stated power of R on D (relative to c_D);
    // probed at the center and the four corners.
    const double required = case_i ? std::pow(R, (p - 0.5) * (1.0 - alpha)) : std::pow(R, -alpha);
    double floor_found = std::numeric_limits<double>::infinity();
    for (double fl : {0.0, -0.5 * side_long, 0.5 * side_long}) {
        for (double fs : {0.0, -0.5 * side_short, 0.5 * side_short}) {
            if ((fl == 0.0) != (fs == 0.0)) continue;   // center + corners only
            double val = amplitude * bump_ft_1d(h_v, q, fl) * bump_ft_1d(h_n, q, fs);
            floor_found = std::min(floor_found, std::abs(val));
        }
    }
    if (floor_found < required / 10.0)
        throw ConvergenceError("build_sharp_example: |psi_hat| on D fell below a tenth of R^" +
                               std::to_string(case_i ? (p - 0.5) * (1.0 - alpha) : -alpha));

    // Midpoint quadrature of the modulated bump train, one local grid per
    // translate in the rotated frame.
    AtomicMeasure m;
    m.atoms.reserve(std::size_t(T) * spb * spb);
    const double cell_v = 2.0 * h_v / spb;
    const double cell_n = 2.0 * h_n / spb;
    const double cell_area = cell_v * cell_n;
    for (long k = 1; k <= T; ++k) {
        Vec2 bump_center = axis * (double(k) / double(T));
        for (int i = 0; i < spb; ++i) {
            double a = -h_v + (i + 0.5) * cell_v;
            double ba = std::pow(1.0 - (a / h_v) * (a / h_v), q);
            for (int j = 0; j < spb; ++j) {
                double b = -h_n + (j + 0.5) * cell_n;
                double bb = std::pow(1.0 - (b / h_n) * (b / h_n), q);
                Vec2 pos = bump_center + axis * a + normal * b;
                double s, c;
                detail::sincos_turns(pos.dot(c_D), s, c);   // e^{2 pi i y . c_D}
                double density = amplitude * ba * bb;
                m.atoms.push_back({pos, Complex(c, s) * (density * cell_area)});
            }
        }
    }
    m.declared_alpha = alpha;
    m.support_radius = support_radius(m);
    m.provenance = Provenance::sharp_example;
    // The sampling grid is strongly anisotropic: below its coarse pitch a ball
    // sees a 1-D row of atoms, not the bump density, and ball-mass ratios read
    // the quadrature artifact instead of the measure.  Audits are meaningful
    // only above the coarse pitch.
    m.atom_spacing = std::max(cell_v, cell_n);

    return {std::move(m), geom, floor_found, required};
}

DimensionReport audit_dimension(const AtomicMeasure& m, double alpha, std::vector<double> radii,
                                const AuditPlan& plan) {
    if (m.atoms.empty()) throw PreconditionError("audit_dimension: empty measure");
    if (!(alpha > 0.0 && alpha <= 2.0))
        throw PreconditionError("audit_dimension: alpha must lie in (0,2]");
    if (radii.empty()) throw PreconditionError("audit_dimension: no radii given");
    std::sort(radii.begin(), radii.end());
    if (!(radii.front() > 0.0)) throw PreconditionError("audit_dimension: radii must be positive");
    if (m.atom_spacing > 0.0 && radii.front() < m.atom_spacing * (1.0 - 1e-12))
        throw PreconditionError(
            "audit_dimension: radius " + std::to_string(radii.front()) +
            " is below the atom spacing " + std::to_string(m.atom_spacing) +
            "; the atomic ratio is not meaningful there");

    std::vector<Vec2> centers;
    if (plan.include_atom_centers)
        for (const Atom& a : m.atoms) centers.push_back(a.position);
    double s = m.support_radius > 0.0 ? m.support_radius : support_radius(m);
    for (int i = 0; i < plan.grid_dim; ++i)
        for (int j = 0; j < plan.grid_dim; ++j)
            centers.push_back({-s + 2.0 * s * (i + 0.5) / plan.grid_dim,
                               -s + 2.0 * s * (j + 0.5) / plan.grid_dim});
    Vec2 com = center_of_mass(m);
    centers.push_back(com);

    std::vector<double> radii2(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) radii2[i] = radii[i] * radii[i];

    struct Best {
        double ratio = -1.0;
        Vec2 center;
        double radius = 0.0;
    };
    std::size_t workers = std::max<std::size_t>(1, thread_count());
    std::vector<Best> best(workers);
    std::size_t stripe = (centers.size() + workers - 1) / workers;
    parallel_for(centers.size(), [&](std::size_t begin, std::size_t end) {
        std::size_t slot = begin / stripe;
        Best local;
        std::vector<double> bins(radii.size());
        for (std::size_t ci = begin; ci < end; ++ci) {
            Vec2 c = centers[ci];
            std::fill(bins.begin(), bins.end(), 0.0);
            for (const Atom& a : m.atoms) {
                double d2 = (a.position - c).norm2();
                auto it = std::lower_bound(radii2.begin(), radii2.end(), d2);
                if (it != radii2.end()) bins[std::size_t(it - radii2.begin())] += std::abs(a.weight);
            }
            double mass = 0.0;
            for (std::size_t ri = 0; ri < radii.size(); ++ri) {
                mass += bins[ri];
                double ratio = mass / std::pow(radii[ri], alpha);
                if (ratio > local.ratio) local = {ratio, c, radii[ri]};
            }
        }
        if (local.ratio > best[slot].ratio) best[slot] = local;
    });

    DimensionReport report;
    report.alpha = alpha;
    report.radii = radii;
    for (const Best& b : best) {
        if (b.ratio > report.worst_ratio) {
            report.worst_ratio = b.ratio;
            report.worst_center = b.center;
            report.worst_radius = b.radius;
        }
    }

    // The global ball: everything around the center of mass.
    double r_enc = 0.0;
    for (const Atom& a : m.atoms) r_enc = std::max(r_enc, (a.position - com).norm());
    r_enc = std::max(r_enc, radii.front());
    double global_ratio = total_variation(m) / std::pow(r_enc, alpha);
    if (global_ratio > report.worst_ratio) {
        report.worst_ratio = global_ratio;
        report.worst_center = com;
        report.worst_radius = r_enc;
    }
    return report;
}

std::vector<double> default_audit_radii(const AtomicMeasure& m) {
    double s = m.support_radius > 0.0 ? m.support_radius : support_radius(m);
    double start = m.atom_spacing > 0.0 ? m.atom_spacing : 2.0 * s / 1024.0;
    std::vector<double> radii;
    for (double r = start; r < 2.0 * s; r *= 2.0) radii.push_back(r);
    radii.push_back(2.0 * s);
    return radii;
}

}  // namespace lab
