#include "latfit/approxnd.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>

#include "latfit/linalg.hpp"

namespace latfit {
namespace {

// Distance from p to the affine hull of `hull` (origin hull[0]), using an
// orthonormal basis of the hull directions.
double distance_to_hull(const PointSet& ps, const std::vector<std::size_t>& hull,
                        std::size_t p) {
  const std::size_t n = ps.dim();
  const auto base = ps.point(hull.front());
  std::vector<Vector> ortho;
  for (std::size_t h = 1; h < hull.size(); ++h) {
    Vector v(n);
    for (std::size_t c = 0; c < n; ++c) v[c] = ps.point(hull[h])[c] - base[c];
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : ortho) {
        const double s = dot(v, u);
        for (std::size_t c = 0; c < n; ++c) v[c] -= s * u[c];
      }
    }
    const double len = norm(v);
    if (len == 0.0) continue;
    for (auto& x : v) x /= len;
    ortho.push_back(std::move(v));
  }
  Vector w(n);
  for (std::size_t c = 0; c < n; ++c) w[c] = ps.point(p)[c] - base[c];
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& u : ortho) {
      const double s = dot(w, u);
      for (std::size_t c = 0; c < n; ++c) w[c] -= s * u[c];
    }
  }
  return norm(w);
}

std::vector<IntVector> anchor_assignment(const NormalizedND& nz,
                                         const QSelection& sel,
                                         std::size_t k) {
  const std::size_t n = nz.W.rows();
  std::vector<IntVector> coeffs(k, IntVector(n, 0));
  for (std::size_t j = 1; j <= n; ++j) {
    auto& c = coeffs[nz.anchor.indices[j]];
    for (std::size_t l = 0; l < n; ++l) c[l] = -sel.Q(l, j - 1);
  }
  for (std::size_t f = 0; f < nz.free_indices.size(); ++f) {
    auto& c = coeffs[nz.free_indices[f]];
    for (std::size_t l = 0; l < n; ++l) c[l] = sel.p_block(l, f);
  }
  return coeffs;
}

QSelection make_selection(const IntMatrix& transform, std::size_t n,
                          const std::vector<std::size_t>& rows) {
  const std::size_t m = transform.cols();
  const std::size_t f = m - n;
  QSelection sel{IntMatrix(n, n), rows, IntMatrix(n, f)};
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) sel.Q(r, c) = transform(rows[r], f + c);
    for (std::size_t c = 0; c < f; ++c) sel.p_block(r, c) = transform(rows[r], c);
  }
  return sel;
}

bool q_block_invertible(const IntMatrix& transform, std::size_t n,
                        const std::vector<std::size_t>& rows) {
  const std::size_t f = transform.cols() - n;
  IntMatrix q(rows.size(), n);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < n; ++c) q(r, c) = transform(rows[r], f + c);
  }
  return linalg::rank(Matrix::convert(q)) == rows.size();
}

CandidateND build_candidate(const PointSet& ps, double eps, NormalizedND nz,
                            Matrix embedding, ReductionResult rr,
                            QSelection sel) {
  auto rec = recover_lattice(nz, sel);
  FitReport report = score(ps, rec.lattice);
  FitReport assigned = score_assigned(ps, rec.lattice, rec.assignment);
  return CandidateND{eps,
                     std::move(nz),
                     std::move(embedding),
                     std::move(rr),
                     std::move(sel),
                     rec.lattice,
                     std::move(rec.assignment),
                     std::move(report),
                     std::move(assigned)};
}

}  // namespace

AnchorSet select_anchors(const PointSet& ps) {
  const std::size_t k = ps.size();
  const std::size_t n = ps.dim();
  const double diam = diameter(ps);
  const double tie = 1e-12 * diam;

  std::size_t bi = 0, bj = 1;
  double best = -1.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const double d = distance(ps.point(i), ps.point(j));
      if (d > best + tie) {
        best = d;
        bi = i;
        bj = j;
      }
    }
  }
  AnchorSet anchors{{bi, bj}};
  while (anchors.indices.size() < n + 1) {
    double far = -1.0;
    std::size_t pick = k;
    for (std::size_t p = 0; p < k; ++p) {
      if (std::find(anchors.indices.begin(), anchors.indices.end(), p) !=
          anchors.indices.end()) {
        continue;
      }
      const double d = distance_to_hull(ps, anchors.indices, p);
      if (d > far + tie) {
        far = d;
        pick = p;
      }
    }
    if (pick == k || far <= 1e-9 * diam) {
      throw Error(ErrorCode::kDegenerateInput, "points lie in a hyperplane");
    }
    anchors.indices.push_back(pick);
  }
  return anchors;
}

NormalizedND normalize_affine(const PointSet& ps, const AnchorSet& anchor) {
  const std::size_t k = ps.size();
  const std::size_t n = ps.dim();
  if (anchor.indices.size() != n + 1) {
    throw Error(ErrorCode::kInvalidArgument, "need n + 1 anchors");
  }
  for (std::size_t i = 0; i < anchor.indices.size(); ++i) {
    if (anchor.indices[i] >= k) {
      throw Error(ErrorCode::kInvalidArgument, "anchor index out of range");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (anchor.indices[i] == anchor.indices[j]) {
        throw Error(ErrorCode::kInvalidArgument, "anchor indices must be distinct");
      }
    }
  }
  NormalizedND nz;
  nz.anchor = anchor;
  const auto o = ps.point(anchor.indices.front());
  nz.origin.assign(o.begin(), o.end());

  Matrix m(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto a = ps.point(anchor.indices[j + 1]);
    for (std::size_t r = 0; r < n; ++r) m(r, j) = a[r] - nz.origin[r];
  }
  nz.W = linalg::invert(m);

  nz.normalized = Matrix(k, n);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t r = 0; r < n; ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < n; ++c) {
        s += nz.W(r, c) * (ps.point(i)[c] - nz.origin[c]);
      }
      nz.normalized(i, r) = s;
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (std::find(anchor.indices.begin(), anchor.indices.end(), i) ==
        anchor.indices.end()) {
      nz.free_indices.push_back(i);
    }
  }
  return nz;
}

Matrix build_embedding_nd(const NormalizedND& nz, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "eps must lie in (0, 1)");
  }
  const std::size_t n = nz.W.rows();
  const std::size_t f = nz.free_indices.size();
  const std::size_t m = f + n;
  Matrix t(m, m);
  for (std::size_t i = 0; i < f; ++i) t(i, i) = 1.0;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t j = 0; j < f; ++j) {
      t(f + r, j) = nz.normalized(nz.free_indices[j], r);
    }
    t(f + r, f + r) = eps;
  }
  return t;
}

QSelection select_Q(const IntMatrix& transform, std::size_t n) {
  if (n == 0 || transform.cols() < n) {
    throw Error(ErrorCode::kInvalidArgument, "transform narrower than n");
  }
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < transform.rows() && rows.size() < n; ++r) {
    rows.push_back(r);
    if (!q_block_invertible(transform, n, rows)) rows.pop_back();
  }
  if (rows.size() < n) {
    throw Error(ErrorCode::kNoInvertibleBlock,
                "transform has fewer than n independent q-blocks");
  }
  return make_selection(transform, n, rows);
}

std::vector<QSelection> enumerate_Q_alternatives(const IntMatrix& transform,
                                                 std::size_t n,
                                                 std::size_t limit) {
  std::vector<QSelection> out;
  const std::size_t m = transform.rows();
  if (n == 0 || n > m) return out;
  std::vector<std::size_t> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = i;
  while (out.size() < limit) {
    if (q_block_invertible(transform, n, rows)) {
      out.push_back(make_selection(transform, n, rows));
    }
    // Next n-subset of {0..m-1} in lexicographic order.
    std::size_t i = n;
    while (i > 0 && rows[i - 1] == m - n + i - 1) --i;
    if (i == 0) break;
    ++rows[i - 1];
    for (std::size_t j = i; j < n; ++j) rows[j] = rows[j - 1] + 1;
  }
  return out;
}

RecoveredLattice recover_lattice(const NormalizedND& nz, const QSelection& sel) {
  const std::size_t n = nz.W.rows();
  const Matrix q = Matrix::convert(sel.Q);
  if (linalg::is_singular(q)) {
    throw Error(ErrorCode::kSingularMatrix, "Q block is singular");
  }
  // -W^-1 Q^-1 = -(Q W)^-1
  const Matrix qw = q * nz.W;
  const Matrix inv = linalg::invert(qw);
  Matrix basis(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < n; ++r) basis(i, r) = -inv(r, i);
  }
  AffineLattice lattice(nz.origin, std::move(basis));
  return {std::move(lattice),
          anchor_assignment(nz, sel, nz.normalized.rows())};
}

CandidateND approximate_general(const PointSet& ps, double eps,
                                const GeneralOptions& options) {
  const AnchorSet anchors =
      options.forced_anchors ? *options.forced_anchors : select_anchors(ps);
  NormalizedND nz = normalize_affine(ps, anchors);
  Matrix t = build_embedding_nd(nz, eps);
  ReductionResult rr =
      lll_reduce(t, ReductionParams{options.delta, options.precision.digits});
  QSelection sel = select_Q(rr.transform, ps.dim());
  return build_candidate(ps, eps, std::move(nz), std::move(t), std::move(rr),
                         std::move(sel));
}

std::vector<CandidateND> alternative_candidates(const PointSet& ps,
                                                const CandidateND& base,
                                                std::size_t limit) {
  std::vector<CandidateND> out;
  for (auto& sel : enumerate_Q_alternatives(base.reduction.transform, ps.dim(), limit)) {
    try {
      out.push_back(build_candidate(ps, base.eps, base.normalized, base.embedding,
                                    base.reduction, std::move(sel)));
    } catch (const Error&) {
      // Numerically singular recovered basis; skip this subset.
    }
  }
  return out;
}

std::vector<SweepEntry> epsilon_sweep(const PointSet& ps,
                                      const std::vector<double>& eps_list,
                                      const GeneralOptions& options,
                                      bool parallel) {
  auto run_one = [&ps, &options](double eps) {
    SweepEntry e;
    e.eps = eps;
    e.precision_warning = eps <= 1e-8 && !options.precision.extended();
    try {
      e.candidate = approximate_general(ps, eps, options);
    } catch (const Error& err) {
      e.error = err.code();
      e.message = err.what();
    }
    return e;
  };
  std::vector<SweepEntry> out;
  out.reserve(eps_list.size());
  if (parallel) {
    std::vector<std::future<SweepEntry>> jobs;
    jobs.reserve(eps_list.size());
    for (double eps : eps_list) jobs.push_back(std::async(std::launch::async, run_one, eps));
    for (auto& j : jobs) out.push_back(j.get());
  } else {
    for (double eps : eps_list) out.push_back(run_one(eps));
  }
  return out;
}

std::vector<double> decade_range(int start_exp, int end_exp) {
  std::vector<double> out;
  const int step = start_exp <= end_exp ? 1 : -1;
  for (int e = start_exp;; e += step) {
    out.push_back(std::pow(10.0, e));
    if (e == end_exp) break;
  }
  return out;
}

}  // namespace latfit
