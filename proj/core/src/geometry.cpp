#include "lab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace lab {

bool adjacent(const DyadicInterval& i, const DyadicInterval& j) {
    if (i.n != j.n) return false;
    return std::abs(i.k - j.k) == 1;
}

bool is_whitney_pair(const DyadicInterval& i, const DyadicInterval& j) {
    if (i.n != j.n) return false;
    if (std::abs(i.k - j.k) <= 1) return false;              // equal or adjacent
    return std::abs((i.k >> 1) - (j.k >> 1)) == 1;           // parents adjacent
}

std::vector<WhitneyPair> whitney_pairs(int n) {
    if (n < 2) throw PreconditionError("whitney_pairs: generation must be >= 2");
    std::vector<WhitneyPair> pairs;
    std::int64_t count = std::int64_t{1} << n;
    for (std::int64_t ki = 0; ki < count; ++ki) {
        // Partners live in the two neighboring parents; scan a local window.
        for (std::int64_t kj = std::max<std::int64_t>(0, ki - 4);
             kj <= std::min(count - 1, ki + 4); ++kj) {
            DyadicInterval I{n, ki}, J{n, kj};
            if (is_whitney_pair(I, J)) pairs.push_back({I, J});
        }
    }
    return pairs;
}

CoverReport whitney_cover_check(const std::vector<std::pair<double, double>>& points, int n_max) {
    if (n_max < 2) throw PreconditionError("whitney_cover_check: n_max must be >= 2");
    double min_gap = std::ldexp(1.0, -n_max);
    CoverReport report;
    report.per_point.reserve(points.size());
    for (auto [s, t] : points) {
        if (!(s > 1.0 && s < 2.0 && t > 1.0 && t < 2.0))
            throw PreconditionError("whitney_cover_check: points must lie in (1,2)^2");
        if (!(std::abs(s - t) > min_gap))
            throw PreconditionError("whitney_cover_check: |s-t| must exceed 2^-n_max");
        int mult = 0;
        for (int n = 2; n <= n_max; ++n) {
            double scale = std::ldexp(1.0, n);
            auto cell = [&](double u) {
                auto k = static_cast<std::int64_t>(std::floor((u - 1.0) * scale));
                return std::clamp<std::int64_t>(k, 0, std::int64_t(scale) - 1);
            };
            if (is_whitney_pair({n, cell(s)}, {n, cell(t)})) ++mult;
        }
        report.per_point.push_back(mult);
        ++report.histogram[mult];
    }
    return report;
}

BoundingRectResult bounding_rect(const CurveSpec& curve, double R, double t_lo, double t_hi,
                                 double c1) {
    if (!(t_lo >= 1.0 && t_hi <= 2.0 && t_hi > t_lo))
        throw PreconditionError("bounding_rect: need a nondegenerate interval inside [1,2]");
    const int M = 1024;
    std::vector<Vec2> pts(M + 1);
    for (int i = 0; i <= M; ++i) {
        double t = t_lo + (t_hi - t_lo) * i / M;
        pts[i] = curve.gamma(t) * R;
    }
    Vec2 axis = (pts[M] - pts[0]).normalized();
    Vec2 normal = axis.perp();
    double lo_l = std::numeric_limits<double>::infinity(), hi_l = -lo_l;
    double lo_s = lo_l, hi_s = -lo_l;
    double gap = 0.0;
    for (int i = 0; i <= M; ++i) {
        double l = pts[i].dot(axis), s = pts[i].dot(normal);
        lo_l = std::min(lo_l, l), hi_l = std::max(hi_l, l);
        lo_s = std::min(lo_s, s), hi_s = std::max(hi_s, s);
        if (i > 0) gap = std::max(gap, (pts[i] - pts[i - 1]).norm());
    }
    BoundingRectResult out;
    out.rect.center = axis * (0.5 * (lo_l + hi_l)) + normal * (0.5 * (lo_s + hi_s));
    out.rect.axis = axis;
    out.rect.half_long = 0.5 * (hi_l - lo_l) + gap;
    out.rect.half_short = 0.5 * (hi_s - lo_s) + gap;
    double len = t_hi - t_lo;
    out.long_budget = c1 * R * len * curve.m();
    out.short_budget = c1 * R * len * len;
    out.within_budget =
        2.0 * out.rect.half_long <= out.long_budget && 2.0 * out.rect.half_short <= out.short_budget;
    for (const Vec2& p : pts) {
        if (!out.rect.contains(p))
            throw ConvergenceError("bounding_rect: containment self-check failed");
    }
    return out;
}

ArcPolyline::ArcPolyline(const CurveSpec& curve, double R, double t_lo, double t_hi,
                         int segments) {
    pts_.resize(segments + 1);
    double max_curv = 0.0;
    for (int i = 0; i <= segments; ++i) {
        double t = t_lo + (t_hi - t_lo) * i / segments;
        pts_[i] = curve.gamma(t) * R;
        double d1 = curve.phi_d1(t);
        double curv = curve.phi_d2(t) / (R * std::pow(1.0 + d1 * d1, 1.5));
        max_curv = std::max(max_curv, curv);
        if (i > 0) max_seg_ = std::max(max_seg_, (pts_[i] - pts_[i - 1]).norm());
    }
    chord_error_ = max_seg_ * max_seg_ * max_curv / 8.0;
}

double ArcPolyline::distance(Vec2 p) const {
    // Coarse scan, then exact segment distances in the best window; the arcs
    // here are graphs of convex functions, so the distance in t is unimodal.
    const std::size_t stride = 64;
    std::size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts_.size(); i += stride) {
        double d2 = (pts_[i] - p).norm2();
        if (d2 < best_d2) best_d2 = d2, best = i;
    }
    std::size_t lo = best > stride ? best - stride : 0;
    std::size_t hi = std::min(pts_.size() - 1, best + stride);
    double d2min = std::numeric_limits<double>::infinity();
    for (std::size_t i = lo; i < hi; ++i) {
        Vec2 a = pts_[i], b = pts_[i + 1];
        Vec2 ab = b - a;
        double tt = std::clamp((p - a).dot(ab) / ab.norm2(), 0.0, 1.0);
        Vec2 q = a + ab * tt;
        d2min = std::min(d2min, (q - p).norm2());
    }
    return std::sqrt(d2min);
}

namespace {

double interval_dist(double a_lo, double a_hi, double b_lo, double b_hi) {
    return std::max({0.0, b_lo - a_hi, a_lo - b_hi});
}

void validate_tube_spec(const TubeSpec& s) {
    if (!(s.R >= 2.0)) throw PreconditionError("tube spec: R must be >= 2");
    if (!(s.delta > 0.0)) throw PreconditionError("tube spec: delta must be > 0");
    if (!(s.C > 0.0 && s.c > 0.0)) throw PreconditionError("tube spec: C and c must be > 0");
    if (!(s.I_lo >= 1.0 && s.I_hi <= 2.0 && s.I_hi > s.I_lo && s.J_lo >= 1.0 && s.J_hi <= 2.0 &&
          s.J_hi > s.J_lo))
        throw PreconditionError("tube spec: intervals must be nondegenerate inside [1,2]");
    double gap = interval_dist(s.I_lo, s.I_hi, s.J_lo, s.J_hi);
    if (!(gap >= s.c * std::ldexp(1.0, -s.n)))
        throw PreconditionError("tube spec: dist(I,J) must be >= c 2^-n");
}

}  // namespace

TubeIntersection tube_intersection_area(const CurveSpec& curve, const TubeSpec& spec) {
    validate_tube_spec(spec);
    if (spec.mc_samples < 10000)
        throw PreconditionError("tube_intersection_area: need >= 10^4 samples");

    double radius = spec.C * std::pow(spec.R, spec.delta);
    ArcPolyline arc_i(curve, spec.R, spec.I_lo, spec.I_hi);
    ArcPolyline arc_j(curve, spec.R, spec.J_lo, spec.J_hi);
    double band = std::max(arc_i.chord_error(), arc_j.chord_error());

    // Sampling box around the stretch of the second tube that the first can
    // reach.  Any intersection point sits within radius+band of both center
    // polylines, so its nearest J node lies within `reach` of the shifted I
    // polyline; boxing only those nodes keeps the hit rate usable when the
    // crossing is a small transversal window of a long tube.
    double reach = 2.0 * (radius + band) + arc_j.max_segment_length();
    double lo_x = std::numeric_limits<double>::infinity(), hi_x = -lo_x;
    double lo_y = lo_x, hi_y = -lo_x;
    for (const Vec2& p : arc_j.points()) {
        if (arc_i.distance(p - spec.x_shift) > reach) continue;
        lo_x = std::min(lo_x, p.x), hi_x = std::max(hi_x, p.x);
        lo_y = std::min(lo_y, p.y), hi_y = std::max(hi_y, p.y);
    }
    TubeIntersection out;
    out.x_shift = spec.x_shift;
    out.R = spec.R;
    out.delta = spec.delta;
    out.C = spec.C;
    out.n = spec.n;
    out.samples = spec.mc_samples;
    if (!(lo_x <= hi_x)) return out;   // no reachable stretch: empty intersection

    double pad = radius + band + arc_j.max_segment_length();
    lo_x -= pad, hi_x += pad, lo_y -= pad, hi_y += pad;
    double box_area = (hi_x - lo_x) * (hi_y - lo_y);

    const std::size_t chunk = 16384;
    std::size_t chunks = (spec.mc_samples + chunk - 1) / chunk;
    std::vector<std::size_t> chunk_hits(chunks, 0);
    parallel_for(chunks, [&](std::size_t begin, std::size_t end) {
        for (std::size_t ci = begin; ci < end; ++ci) {
            std::mt19937_64 rng(split_seed(spec.seed, ci));
            std::uniform_real_distribution<double> ux(lo_x, hi_x), uy(lo_y, hi_y);
            std::size_t n = std::min(chunk, spec.mc_samples - ci * chunk);
            std::size_t hits = 0;
            for (std::size_t s = 0; s < n; ++s) {
                Vec2 pt{ux(rng), uy(rng)};
                if (arc_j.distance(pt) > radius + band) continue;
                if (arc_i.distance(pt - spec.x_shift) <= radius + band) ++hits;
            }
            chunk_hits[ci] = hits;
        }
    });

    std::size_t hits = 0;
    for (std::size_t h : chunk_hits) hits += h;
    double frac = double(hits) / double(spec.mc_samples);

    out.area = box_area * frac;
    out.std_error = box_area * std::sqrt(std::max(0.0, frac * (1.0 - frac)) / spec.mc_samples);
    out.bound_ratio =
        out.area / (std::pow(spec.R, 2.0 * spec.delta) * std::ldexp(1.0, spec.n) * curve.m());
    out.hits = hits;
    out.samples = spec.mc_samples;
    return out;
}

WBoundScan w_bound_scan(const CurveSpec& curve, const TubeSpec& spec) {
    validate_tube_spec(spec);
    const double R = spec.R;
    const double thresh = 2.0 * spec.C * std::pow(R, spec.delta);
    auto point = [&](double t) { return curve.gamma(t) * R; };
    auto dist = [&](double t, double s) {
        return (spec.x_shift + point(t) - point(s)).norm();
    };
    auto min_over_J = [&](double t, double v_lo, double v_hi, double* arg = nullptr) {
        const int grid = 2048;
        double best = std::numeric_limits<double>::infinity(), best_s = v_lo;
        for (int i = 0; i <= grid; ++i) {
            double s = v_lo + (v_hi - v_lo) * i / grid;
            double d = dist(t, s);
            if (d < best) best = d, best_s = s;
        }
        if (arg) *arg = best_s;
        return best;
    };

    // t minimal subject to the base intersection.
    const int t_grid = 4096;
    double t_base = std::numeric_limits<double>::quiet_NaN(), s_base = 0.0;
    for (int i = 0; i <= t_grid; ++i) {
        double t = spec.I_lo + (spec.I_hi - spec.I_lo) * i / t_grid;
        double s;
        if (min_over_J(t, spec.J_lo, spec.J_hi, &s) <= thresh) {
            t_base = t;
            s_base = s;
            break;
        }
    }
    if (!(t_base == t_base))
        throw PreconditionError("w_bound_scan: the tubes never meet; the base intersection premise fails");

    WBoundScan out;
    out.t_base = t_base;
    out.s_base = s_base;
    out.bound = 8.0 * spec.C * std::ldexp(1.0, spec.n) * std::pow(R, spec.delta - 1.0) *
                curve.max_d1() / (spec.c * curve.min_d2());

    const int w_grid = 4096;
    double w_hi = spec.I_hi - t_base;
    for (int i = w_grid; i >= 0; --i) {
        double w = w_hi * i / w_grid;
        if (min_over_J(t_base + w, spec.J_lo, spec.J_hi) <= thresh) {
            out.w_max = w;
            break;
        }
    }
    return out;
}

}  // namespace lab
