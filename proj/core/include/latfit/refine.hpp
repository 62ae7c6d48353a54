#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "latfit/approx1d.hpp"
#include "latfit/approxnd.hpp"
#include "latfit/lattice.hpp"

namespace latfit {

// Frozen lattice coordinates for every input point (rows[i] belongs to point
// point_order[i]).
struct CoefficientAssignment {
  std::vector<IntVector> rows;
  std::vector<std::size_t> point_order;

  static CoefficientAssignment identity_order(std::vector<IntVector> rows);
};

// k x (n+1): a ones column for the origin, then the integer coordinates.
Matrix build_design(const CoefficientAssignment& assign);

struct RefineResult {
  AffineLattice lattice;
  // Re-scored against nearest lattice points.
  FitReport report;
  // Sum of squared distances to the assigned lattice points.
  double frozen_rss = 0.0;
};

// One least-squares pass: with the coordinates frozen, choose origin and basis
// minimizing the sum of squared distances from each point to its assigned
// lattice point.
RefineResult refine_fit(const PointSet& ps, const CoefficientAssignment& assign);

// Sum of squared distances from each point to its assigned lattice point.
double frozen_residual(const PointSet& ps, const AffineLattice& lat,
                       const CoefficientAssignment& assign);

CoefficientAssignment assignment_from(const CandidateND& cand);
CoefficientAssignment assignment_from(const Candidate1D& cand,
                                      const Normalized1D& nz);

struct RefinementSummary {
  FitReport before;
  double before_frozen_rss = 0.0;
  RefineResult after;
};

RefinementSummary refine_candidate(const PointSet& ps, const CandidateND& cand);
RefinementSummary refine_candidate(const PointSet& ps, const Candidate1D& cand,
                                   const Normalized1D& nz);

}  // namespace latfit
