#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "lab/common.hpp"
#include "lab/curve.hpp"

namespace lab {

// Dyadic subinterval of [1,2]: [1 + k 2^-n, 1 + (k+1) 2^-n], 0 <= k < 2^n.
struct DyadicInterval {
    int n = 0;
    std::int64_t k = 0;

    double a() const { return 1.0 + static_cast<double>(k) * std::ldexp(1.0, -n); }
    double b() const { return 1.0 + static_cast<double>(k + 1) * std::ldexp(1.0, -n); }
    double length() const { return std::ldexp(1.0, -n); }
    DyadicInterval parent() const { return {n - 1, k >> 1}; }

    bool operator==(const DyadicInterval& o) const { return n == o.n && k == o.k; }
};

// "Adjacent" means distinct with intersecting closures; intervals of the same
// generation are adjacent iff |k_I - k_J| == 1.
bool adjacent(const DyadicInterval& i, const DyadicInterval& j);

// Equal-length dyadic intervals, non-adjacent, with adjacent parents.
struct WhitneyPair {
    DyadicInterval I, J;
};

bool is_whitney_pair(const DyadicInterval& i, const DyadicInterval& j);

// All ordered Whitney pairs at generation n >= 2, lexicographic in (k_I, k_J).
std::vector<WhitneyPair> whitney_pairs(int n);

struct CoverReport {
    std::vector<int> per_point;      // multiplicity of each sample point
    std::map<int, int> histogram;    // multiplicity -> count
};

// For each (s,t) in the open square, counts the Whitney rectangles I x J with
// 2 <= n <= n_max containing it. Points must keep |s-t| > 2^-n_max.
CoverReport whitney_cover_check(const std::vector<std::pair<double, double>>& points, int n_max);

// Rectangle with arbitrary orientation; axis points along the long side.
struct RotRect {
    Vec2 center;
    Vec2 axis;   // unit
    double half_long = 0.0;
    double half_short = 0.0;

    // Coordinates of p in the (axis, axis.perp()) frame centered at center.
    Vec2 to_frame(Vec2 p) const {
        Vec2 d = p - center;
        return {d.dot(axis), d.dot(axis.perp())};
    }
    Vec2 from_frame(Vec2 f) const { return center + axis * f.x + axis.perp() * f.y; }
    bool contains(Vec2 p, double slack = 1e-9) const {
        Vec2 f = to_frame(p);
        return std::abs(f.x) <= half_long + slack && std::abs(f.y) <= half_short + slack;
    }
    double area() const { return 4.0 * half_long * half_short; }
};

struct BoundingRectResult {
    RotRect rect;
    double long_budget = 0.0;    // c1 * R * len * m
    double short_budget = 0.0;   // c1 * R * len^2
    bool within_budget = false;
};

// Minimal chord-aligned rectangle containing {R gamma(t) : t in I}, inflated
// by the sampling gap, checked against the side budgets R*len*m and R*len^2.
BoundingRectResult bounding_rect(const CurveSpec& curve, double R, double t_lo, double t_hi,
                                 double c1 = 4.0);

struct TubeSpec {
    double R = 2.0;
    double delta = 0.1;
    double C = 2.0;       // tube radius is C * R^delta
    double c = 0.5;       // separation constant: dist(I,J) >= c 2^-n
    int n = 2;
    double I_lo = 0.0, I_hi = 0.0;   // \tilde I
    double J_lo = 0.0, J_hi = 0.0;   // \tilde J
    Vec2 x_shift;
    std::size_t mc_samples = 100000;
    std::uint64_t seed = 1;
};

struct TubeIntersection {
    Vec2 x_shift;
    double R = 0.0, delta = 0.0, C = 0.0;
    int n = 0;
    double area = 0.0;
    double std_error = 0.0;
    double bound_ratio = 0.0;    // area / (R^{2 delta} 2^n m)
    std::size_t hits = 0;
    std::size_t samples = 0;
};

// Monte-Carlo area of (x + tube around R*gamma(I)) intersected with the tube
// around R*gamma(J), both of radius C R^delta. Sampling box covers the stretch
// of the second tube reachable from the first; common random numbers for a
// fixed seed.
TubeIntersection tube_intersection_area(const CurveSpec& curve, const TubeSpec& spec);

struct WBoundScan {
    double w_max = 0.0;      // largest admissible shift found
    double bound = 0.0;      // 8 C 2^n R^{delta-1} m1 / (c m2)
    double t_base = 0.0;     // minimal t realizing the base intersection
    double s_base = 0.0;
};

// Grid scan for the largest w such that the shifted tubes around gamma(t+w)
// and gamma(s+v) still intersect for some admissible v; checks it against the
// lemma's bound computed from the measured derivative extremes.
WBoundScan w_bound_scan(const CurveSpec& curve, const TubeSpec& spec);

// Distance from a point to the arc {R gamma(t) : t in [lo,hi]}, computed via
// projection onto a fine polyline (default 4096 segments).
class ArcPolyline {
  public:
    ArcPolyline(const CurveSpec& curve, double R, double t_lo, double t_hi, int segments = 4096);

    double distance(Vec2 p) const;
    double max_segment_length() const { return max_seg_; }
    // Bound on the polyline-vs-arc deviation, folded into hit tests as a band.
    double chord_error() const { return chord_error_; }
    const std::vector<Vec2>& points() const { return pts_; }

  private:
    std::vector<Vec2> pts_;
    double max_seg_ = 0.0;
    double chord_error_ = 0.0;
};

}  // namespace lab
