#include "latfit/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "latfit/error.hpp"
#include "latfit/linalg.hpp"
#include "latfit/lll.hpp"

namespace latfit {

PointSet::PointSet(Matrix coords) : coords_(std::move(coords)) {
  if (!all_finite(coords_)) {
    throw Error(ErrorCode::kDegenerateInput, "point coordinates must be finite");
  }
  const std::size_t k = coords_.rows();
  const std::size_t n = coords_.cols();
  if (k <= n + 1) {
    throw Error(ErrorCode::kDegenerateInput,
                "need more than n + 1 points (k = " + std::to_string(k) +
                    ", n = " + std::to_string(n) + ")");
  }
  Matrix centered = coords_;
  for (std::size_t c = 0; c < n; ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < k; ++r) mean += coords_(r, c);
    mean /= static_cast<double>(k);
    for (std::size_t r = 0; r < k; ++r) centered(r, c) -= mean;
  }
  const auto sv = linalg::singular_values(centered);
  if (sv.front() <= 0.0 || sv.back() <= 1e-9 * sv.front()) {
    throw Error(ErrorCode::kDegenerateInput, "points lie in a hyperplane");
  }
}

PointSet PointSet::from_rows(const std::vector<Vector>& rows) {
  return PointSet(Matrix::from_rows(rows));
}

PointSet PointSet::from_values(const std::vector<double>& values) {
  if (values.empty()) {
    throw Error(ErrorCode::kDegenerateInput, "empty value list");
  }
  Matrix m(values.size(), 1);
  for (std::size_t i = 0; i < values.size(); ++i) m(i, 0) = values[i];
  return PointSet(std::move(m));
}

AffineLattice::AffineLattice(Vector origin, Matrix basis)
    : origin_(std::move(origin)), basis_(std::move(basis)) {
  if (!basis_.square() || basis_.rows() != origin_.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "lattice needs n basis vectors of dimension n");
  }
  if (!all_finite(basis_) ||
      !std::all_of(origin_.begin(), origin_.end(),
                   [](double x) { return std::isfinite(x); })) {
    throw Error(ErrorCode::kInvalidArgument, "lattice entries must be finite");
  }
  if (linalg::is_singular(basis_)) {
    throw Error(ErrorCode::kSingularMatrix, "lattice basis is singular");
  }
}

Vector AffineLattice::point_at(std::span<const std::int64_t> coeffs) const {
  if (coeffs.size() != dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "coefficient count");
  }
  Vector p = origin_;
  for (std::size_t j = 0; j < dim(); ++j) {
    const double c = static_cast<double>(coeffs[j]);
    for (std::size_t i = 0; i < dim(); ++i) p[i] += c * basis_(j, i);
  }
  return p;
}

std::vector<Vector> FitReport::approximations() const {
  std::vector<Vector> out;
  out.reserve(coeffs.size());
  for (const auto& c : coeffs) out.push_back(lattice.point_at(c));
  return out;
}

double FitReport::residual_sum_squares() const {
  double s = 0.0;
  for (double d : distances) s += d * d;
  return s;
}

NearestPointSolver::NearestPointSolver(const AffineLattice& lattice)
    : origin_(lattice.origin()) {
  auto rr = lll_reduce(lattice.basis());
  reduced_ = std::move(rr.reduced);
  transform_ = std::move(rr.transform);
  reduced_inverse_t_ = linalg::invert(reduced_.transposed());
}

NearestPoint NearestPointSolver::query(std::span<const double> p) const {
  const std::size_t n = origin_.size();
  if (p.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "point dimension differs from lattice");
  }
  Vector rel(n);
  for (std::size_t i = 0; i < n; ++i) rel[i] = p[i] - origin_[i];

  std::vector<double> base(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += reduced_inverse_t_(i, j) * rel[j];
    if (!(std::abs(s) < 9.0e15)) {
      throw Error(ErrorCode::kPrecisionLoss, "point too far from lattice origin");
    }
    base[i] = std::round(s);
  }

  auto dist_for = [&](const std::vector<double>& c) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double x = rel[i];
      for (std::size_t j = 0; j < n; ++j) x -= c[j] * reduced_(j, i);
      s += x * x;
    }
    return std::sqrt(s);
  };

  std::vector<double> best = base;
  double best_dist = dist_for(base);
  if (n <= 3) {
    std::size_t combos = 1;
    for (std::size_t i = 0; i < n; ++i) combos *= 3;
    std::vector<double> trial(n);
    for (std::size_t code = 0; code < combos; ++code) {
      std::size_t rest = code;
      for (std::size_t i = 0; i < n; ++i) {
        trial[i] = base[i] + static_cast<double>(rest % 3) - 1.0;
        rest /= 3;
      }
      const double d = dist_for(trial);
      if (d < best_dist) {
        best_dist = d;
        best = trial;
      }
    }
  }

  // Coordinates in the reduced basis -> coordinates in the caller's basis.
  NearestPoint out{IntVector(n, 0), best_dist};
  for (std::size_t j = 0; j < n; ++j) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      s += static_cast<std::int64_t>(best[i]) * transform_(i, j);
    }
    out.coeffs[j] = s;
  }
  return out;
}

NearestPoint nearest_point(const AffineLattice& lat, std::span<const double> p) {
  return NearestPointSolver(lat).query(p);
}

double lattice_delta(const AffineLattice& lat) {
  const double det = std::abs(linalg::determinant(lat.basis()));
  if (det <= linalg::singularity_threshold(lat.basis())) {
    throw Error(ErrorCode::kSingularMatrix, "lattice basis is singular");
  }
  return std::pow(det, 1.0 / static_cast<double>(lat.dim()));
}

double diameter(const Matrix& points) {
  double best = 0.0;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    for (std::size_t j = i + 1; j < points.rows(); ++j) {
      best = std::max(best, distance(points.row(i), points.row(j)));
    }
  }
  return best;
}

double diameter(const PointSet& ps) { return diameter(ps.coords()); }

double norm_factor(double diam, double delta, std::size_t k, std::size_t n) {
  const double exponent =
      static_cast<double>(n) / static_cast<double>(k - n - 1);
  return std::pow(diam / delta, exponent) / delta;
}

namespace {

FitReport finish_report(const PointSet& ps, const AffineLattice& lat,
                        std::vector<IntVector> coeffs,
                        std::vector<double> distances) {
  FitReport r{lat, std::move(coeffs), std::move(distances)};
  r.delta = lattice_delta(lat);
  r.diameter = diameter(ps);
  const double f = norm_factor(r.diameter, r.delta, ps.size(), ps.dim());
  double max_d = 0.0;
  double sum2 = 0.0;
  for (double d : r.distances) {
    max_d = std::max(max_d, d);
    sum2 += d * d;
  }
  r.norm_max = max_d * f;
  r.norm_l2 = std::sqrt(sum2) * f;
  return r;
}

void require_same_dim(const PointSet& ps, const AffineLattice& lat) {
  if (ps.dim() != lat.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "point set and lattice dimensions differ");
  }
}

}  // namespace

FitReport score(const PointSet& ps, const AffineLattice& lat) {
  require_same_dim(ps, lat);
  NearestPointSolver solver(lat);
  std::vector<IntVector> coeffs;
  std::vector<double> distances;
  coeffs.reserve(ps.size());
  distances.reserve(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    auto np = solver.query(ps.point(i));
    coeffs.push_back(std::move(np.coeffs));
    distances.push_back(np.distance);
  }
  return finish_report(ps, lat, std::move(coeffs), std::move(distances));
}

FitReport score_assigned(const PointSet& ps, const AffineLattice& lat,
                         const std::vector<IntVector>& coeffs) {
  require_same_dim(ps, lat);
  if (coeffs.size() != ps.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "one coefficient row per point");
  }
  std::vector<double> distances;
  distances.reserve(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const Vector approx = lat.point_at(coeffs[i]);
    distances.push_back(distance(ps.point(i), approx));
  }
  return finish_report(ps, lat, coeffs, std::move(distances));
}

}  // namespace latfit
