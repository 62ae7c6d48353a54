#include "latfit/refine.hpp"

#include <algorithm>
#include <numeric>

#include "latfit/error.hpp"
#include "latfit/linalg.hpp"

namespace latfit {
namespace {

void validate(const PointSet& ps, const CoefficientAssignment& assign) {
  const std::size_t n = ps.dim();
  if (assign.rows.size() != ps.size() || assign.point_order.size() != ps.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "one assignment row per point");
  }
  for (const auto& r : assign.rows) {
    if (r.size() != n) {
      throw Error(ErrorCode::kDimensionMismatch, "assignment row length must be n");
    }
  }
  for (std::size_t idx : assign.point_order) {
    if (idx >= ps.size()) {
      throw Error(ErrorCode::kInvalidArgument, "point index out of range");
    }
  }
  auto distinct = assign.rows;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < n + 1) {
    throw Error(ErrorCode::kRankDeficient, "need at least n + 1 distinct rows");
  }
}

}  // namespace

CoefficientAssignment CoefficientAssignment::identity_order(std::vector<IntVector> rows) {
  CoefficientAssignment a{std::move(rows), {}};
  a.point_order.resize(a.rows.size());
  std::iota(a.point_order.begin(), a.point_order.end(), 0);
  return a;
}

Matrix build_design(const CoefficientAssignment& assign) {
  if (assign.rows.empty() || assign.rows.front().empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty assignment");
  }
  const std::size_t n = assign.rows.front().size();
  Matrix design(assign.rows.size(), n + 1);
  for (std::size_t i = 0; i < assign.rows.size(); ++i) {
    if (assign.rows[i].size() != n) {
      throw Error(ErrorCode::kDimensionMismatch, "ragged assignment");
    }
    design(i, 0) = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      design(i, j + 1) = static_cast<double>(assign.rows[i][j]);
    }
  }
  return design;
}

double frozen_residual(const PointSet& ps, const AffineLattice& lat,
                       const CoefficientAssignment& assign) {
  validate(ps, assign);
  double s = 0.0;
  for (std::size_t i = 0; i < assign.rows.size(); ++i) {
    const Vector approx = lat.point_at(assign.rows[i]);
    const double d = distance(ps.point(assign.point_order[i]), approx);
    s += d * d;
  }
  return s;
}

RefineResult refine_fit(const PointSet& ps, const CoefficientAssignment& assign) {
  validate(ps, assign);
  const std::size_t n = ps.dim();
  const Matrix design = build_design(assign);
  Matrix targets(ps.size(), n);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto p = ps.point(assign.point_order[i]);
    for (std::size_t c = 0; c < n; ++c) targets(i, c) = p[c];
  }
  const Matrix x = linalg::least_squares(design, targets);
  Vector origin(x.row(0).begin(), x.row(0).end());
  Matrix basis(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t c = 0; c < n; ++c) basis(j, c) = x(j + 1, c);
  }
  AffineLattice lattice(std::move(origin), std::move(basis));
  FitReport report = score(ps, lattice);
  const double rss = frozen_residual(ps, lattice, assign);
  return RefineResult{std::move(lattice), std::move(report), rss};
}

CoefficientAssignment assignment_from(const CandidateND& cand) {
  return CoefficientAssignment::identity_order(cand.assignment);
}

CoefficientAssignment assignment_from(const Candidate1D& cand,
                                      const Normalized1D& nz) {
  CoefficientAssignment a;
  a.rows.reserve(cand.p.size());
  for (std::int64_t p : cand.p) a.rows.push_back({p});
  a.point_order = nz.sort_permutation;
  return a;
}

RefinementSummary refine_candidate(const PointSet& ps, const CandidateND& cand) {
  const auto assign = assignment_from(cand);
  return RefinementSummary{cand.report, frozen_residual(ps, cand.lattice, assign),
                           refine_fit(ps, assign)};
}

RefinementSummary refine_candidate(const PointSet& ps, const Candidate1D& cand,
                                   const Normalized1D& nz) {
  const auto assign = assignment_from(cand, nz);
  const AffineLattice lat = cand.lattice();
  FitReport before = cand.report ? *cand.report : score(ps, lat);
  return RefinementSummary{std::move(before), frozen_residual(ps, lat, assign),
                           refine_fit(ps, assign)};
}

}  // namespace latfit
