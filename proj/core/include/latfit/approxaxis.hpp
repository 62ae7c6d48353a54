#pragma once

#include <vector>

#include "latfit/approx1d.hpp"
#include "latfit/lattice.hpp"

namespace latfit {

// Rectangular lattice fit: the 1-D pipeline runs independently on each
// coordinate, giving basis d_i * e_i with origin at the per-axis minima.
struct AxisResult {
  std::vector<Candidate1D> per_axis;
  AffineLattice lattice;
  FitReport report;
};

// One eps per axis, or a single eps shared by all axes.
AxisResult approximate_axis(const PointSet& ps, const std::vector<double>& eps,
                            const Approx1DOptions& options = {});
AxisResult approximate_axis(const PointSet& ps, double eps,
                            const Approx1DOptions& options = {});

}  // namespace latfit
