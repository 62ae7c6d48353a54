#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "latfit/error.hpp"
#include "latfit/lattice.hpp"
#include "latfit/lll.hpp"
#include "latfit/matrix.hpp"
#include "latfit/precision.hpp"

namespace latfit {

// indices[0] maps to the origin, indices[j] (j = 1..n) to the unit vector e_j.
struct AnchorSet {
  std::vector<std::size_t> indices;
};

struct NormalizedND {
  Matrix W;
  Vector origin;
  // W (a_i - origin) for every input point, one per row.
  Matrix normalized;
  AnchorSet anchor;
  // Non-anchor indices in input order.
  std::vector<std::size_t> free_indices;
};

// The n x n integer block of transform rows chosen to recover the lattice.
struct QSelection {
  IntMatrix Q;
  std::vector<std::size_t> q_rows;
  // Leading (k - n - 1) entries of the selected rows, one row per q_row.
  IntMatrix p_block;
};

struct CandidateND {
  double eps = 0.0;
  NormalizedND normalized;
  Matrix embedding;
  ReductionResult reduction;
  QSelection selection;
  AffineLattice lattice;
  // Lattice coordinates fixed by the reduction: 0 for the origin anchor, the
  // negated Q columns for the other anchors, p_block columns for free points.
  std::vector<IntVector> assignment;
  // Scored against the nearest lattice point of every input point.
  FitReport report;
  // Scored against the assigned lattice points.
  FitReport assigned;
};

// Diameter pair first (lower index becomes the origin), then repeatedly the
// point farthest from the affine hull of the anchors chosen so far. Ties go
// to the lowest index. Throws DegenerateInput for points in a hyperplane.
AnchorSet select_anchors(const PointSet& ps);

NormalizedND normalize_affine(const PointSet& ps, const AnchorSet& anchor);

// (k-1) x (k-1): identity over the free-point columns, then n rows holding
// coordinate r of every free point followed by eps * I_n.
Matrix build_embedding_nd(const NormalizedND& nz, double eps);

// Greedy top-down scan keeping rows whose trailing n entries extend the rank.
QSelection select_Q(const IntMatrix& transform, std::size_t n);

// Up to `limit` alternative row subsets (lexicographic order) whose Q block is
// invertible. Debug aid; the pipeline itself uses select_Q.
std::vector<QSelection> enumerate_Q_alternatives(const IntMatrix& transform,
                                                 std::size_t n,
                                                 std::size_t limit = 10);

struct RecoveredLattice {
  AffineLattice lattice;
  std::vector<IntVector> assignment;
};

// Basis d_i = column i of -W^-1 Q^-1 with origin at the origin anchor.
RecoveredLattice recover_lattice(const NormalizedND& nz, const QSelection& sel);

struct GeneralOptions {
  Precision precision{};
  double delta = 0.75;
  // Skip anchor selection and use these indices instead.
  std::optional<AnchorSet> forced_anchors;
};

CandidateND approximate_general(const PointSet& ps, double eps,
                                const GeneralOptions& options = {});

// Candidates for alternative Q blocks of an already reduced embedding.
std::vector<CandidateND> alternative_candidates(const PointSet& ps,
                                                const CandidateND& base,
                                                std::size_t limit = 10);

struct SweepEntry {
  double eps = 0.0;
  std::optional<CandidateND> candidate;
  std::optional<ErrorCode> error;
  std::string message;
  // eps <= 1e-8 was run at double precision.
  bool precision_warning = false;

  bool ok() const noexcept { return candidate.has_value(); }
};

// One pipeline run per eps, in the order given. Failures are recorded per
// entry; the sweep itself never throws for a pipeline error.
std::vector<SweepEntry> epsilon_sweep(const PointSet& ps,
                                      const std::vector<double>& eps_list,
                                      const GeneralOptions& options = {},
                                      bool parallel = false);

// Powers of ten 10^start ... 10^end, inclusive, stepping by one decade.
std::vector<double> decade_range(int start_exp, int end_exp);

}  // namespace latfit
