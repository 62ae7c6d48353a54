#include "latfit/approxaxis.hpp"

#include <string>

#include "latfit/error.hpp"

namespace latfit {

AxisResult approximate_axis(const PointSet& ps, const std::vector<double>& eps,
                            const Approx1DOptions& options) {
  const std::size_t n = ps.dim();
  if (eps.size() != 1 && eps.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "give one eps or one per axis");
  }
  std::vector<Candidate1D> per_axis;
  per_axis.reserve(n);
  Vector origin(n);
  Matrix basis(n, n);
  for (std::size_t axis = 0; axis < n; ++axis) {
    const double e = eps.size() == 1 ? eps.front() : eps[axis];
    const auto values = ps.coordinate(axis);
    try {
      auto r = approximate_1d(values, e, options);
      origin[axis] = r.best.origin;
      basis(axis, axis) = r.best.d;
      per_axis.push_back(std::move(r.best));
    } catch (const Error& err) {
      std::string msg = err.what();
      const auto colon = msg.find(": ");
      if (colon != std::string::npos) msg.erase(0, colon + 2);
      throw Error(err.code(), "axis " + std::to_string(axis) + ": " + msg);
    }
  }
  AffineLattice lattice(std::move(origin), std::move(basis));
  FitReport report = score(ps, lattice);
  return AxisResult{std::move(per_axis), std::move(lattice), std::move(report)};
}

AxisResult approximate_axis(const PointSet& ps, double eps,
                            const Approx1DOptions& options) {
  return approximate_axis(ps, std::vector<double>{eps}, options);
}

}  // namespace latfit
