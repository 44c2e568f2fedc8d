#pragma once

// Internal direct-summation kernel for mu_hat. Phases are handled in turns
// (cycles) with an in-house quadrant-reduced polynomial sincos so that results
// are a pure function of the inputs: no libm dispatch, exact odd/even symmetry,
// identical values from every call path.

#include <cstddef>
#include <vector>

#include "lab/common.hpp"
#include "lab/measures.hpp"

namespace lab::detail {

// sin and cos of 2*pi*u.
void sincos_turns(double u, double& s, double& c);

// Structure-of-arrays copy of the atom list, zero-weight padded to a multiple
// of four so the vector path never reads past logical atoms.
struct FtTable {
    std::vector<double> xs, ys, wre, wim;
    std::size_t n = 0;        // logical atom count
    std::size_t n_padded = 0;

    explicit FtTable(const std::vector<Atom>& atoms);
};

// sum_j w_j exp(-2 pi i xi . x_j) with fixed-chunk summation: plain sums inside
// each chunk, Kahan combination across chunks in index order.
Complex ft_eval(const FtTable& table, Vec2 xi, std::size_t chunk_size);

}  // namespace lab::detail
