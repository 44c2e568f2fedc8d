#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "lab/common.hpp"
#include "lab/geometry.hpp"

namespace lab {

inline constexpr std::size_t kDefaultAtomBudget = 10'000'000;

enum class Provenance { cantor, sharp_example, custom };

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

struct Atom {
    Vec2 position;
    Complex weight;
};

// Finite weighted sum of point masses; the numerical carrier for every measure
// in the project. atom_spacing records the finest construction cell size (0 if
// unknown); dimension audits refuse radii below it.
struct AtomicMeasure {
    std::vector<Atom> atoms;
    double declared_alpha = 0.0;
    double support_radius = 0.0;
    Provenance provenance = Provenance::custom;
    double atom_spacing = 0.0;
};

double total_variation(const AtomicMeasure& m);
double support_radius(const AtomicMeasure& m);   // max |x_j|, recomputed
Vec2 center_of_mass(const AtomicMeasure& m);     // |weight|-weighted

// Product Cantor construction: per axis, `branches` children of relative size
// `ratio` spread evenly across the parent (middle-thirds for 2 x 1/3).
struct CantorSpec {
    int branches_x = 2;
    double ratio_x = 1.0 / 3.0;
    int branches_y = 2;
    double ratio_y = 1.0 / 3.0;
    int depth = 1;

    double implied_alpha() const;
    void validate() const;
};

AtomicMeasure build_cantor_measure(const CantorSpec& spec,
                                   std::size_t atom_budget = kDefaultAtomBudget);

enum class SharpCase { case_i, case_iii };

// Parameters of the modulated bump-train measures that saturate the sharp
// exponent: case_i lives on [R, R+sqrt(R)] frequencies (needs alpha > 1),
// case_iii on [R, 2R] (needs alpha <= 1/2).
struct SharpExampleSpec {
    double p = 2.0;
    double alpha = 1.5;
    double R = 256.0;
    SharpCase case_id = SharpCase::case_i;
    int bump_order = 2;
    int samples_per_bump = 8;

    void validate() const;
    long T() const;          // number of bump translates (>= 1)
    long N() const;          // number of unit frequency strips
};

struct DerivedGeometry {
    RotRect rect_D;     // frequency-side rectangle containing the arc
    Vec2 v;             // unit vector along the long axis of D
    Vec2 c_D;           // center of D
    long T = 0;
    long N = 0;
};

struct SharpExample {
    AtomicMeasure measure;
    DerivedGeometry geometry;
    double psi_hat_floor = 0.0;      // weakest |psi_hat| found on D's corners/center
    double psi_hat_required = 0.0;   // the power of R it must dominate
};

SharpExample build_sharp_example(const SharpExampleSpec& spec,
                                 std::size_t atom_budget = kDefaultAtomBudget);

struct AuditPlan {
    bool include_atom_centers = true;
    int grid_dim = 64;               // uniform grid over the support square
};

struct DimensionReport {
    double alpha = 0.0;
    std::vector<double> radii;
    double worst_ratio = 0.0;
    Vec2 worst_center;
    double worst_radius = 0.0;
};

// worst_ratio = max over sampled centers and radii of mass(B(center,r))/r^alpha
// where mass uses |weight|. The ball around the center of mass that encloses
// everything is always sampled.
DimensionReport audit_dimension(const AtomicMeasure& m, double alpha,
                                std::vector<double> radii, const AuditPlan& plan = {});

// Dyadic radii from atom_spacing (or a support-derived floor) to 2*support_radius.
std::vector<double> default_audit_radii(const AtomicMeasure& m);

}  // namespace lab
