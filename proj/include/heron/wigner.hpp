#pragma once

// Wigner functions on phase-space grids, negativity counting along cuts,
// and the integrated-negativity summary.

#include <vector>

#include "heron/fock.hpp"

namespace heron {

struct GridSpec {
    double x_min = -5.0, x_max = 5.0;
    double p_min = -5.0, p_max = 5.0;
    int nx = 201, np = 201;
};

struct WignerGrid {
    GridSpec spec;
    std::vector<double> values;  // values[j*nx + i] = W(x_i, p_j)

    double x_at(int i) const;
    double p_at(int j) const;
    double value_at(int i, int j) const { return values[static_cast<std::size_t>(j) * spec.nx + i]; }

    double cell_area() const;
    double integral() const;   // Riemann sum of values * dx * dp
    double min_value() const;
    double max_abs() const;
};

// W(x,p) from the associated-Laguerre closed form for number-basis matrix
// elements; exact up to floating point, O(d^2) per point.
double wigner_point(const DensityOperator& rho, double x, double p);

WignerGrid wigner_grid(const DensityOperator& rho, const GridSpec& spec);

// Maximal contiguous sample runs with W < -threshold along the straight
// line through the origin at cut_angle, parameter range ±cut_range.
int count_negative_intervals(const DensityOperator& rho, double cut_angle,
                             double cut_range = 4.0, int samples = 2001,
                             double threshold = 1e-4);

// Riemann sum of max(0, -W) over the grid.
double negativity_volume(const DensityOperator& rho, const GridSpec& spec = {});

}  // namespace heron
