#include "collapse/simplex.hpp"

#include <cmath>
#include <sstream>

namespace collapse {

SimplexPoint::SimplexPoint(std::vector<double> r, double sum_tol)
    : r_(std::move(r)) {
  if (r_.empty()) throw ValidationError("SimplexPoint: empty coordinate vector");
  double sum = 0.0;
  for (double& v : r_) {
    if (!std::isfinite(v)) throw ValidationError("SimplexPoint: non-finite coordinate");
    if (v < 0.0) {
      if (v < -1e-12) {
        std::ostringstream os;
        os << "SimplexPoint: negative coordinate " << v;
        throw ValidationError(os.str());
      }
      v = 0.0;
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > sum_tol) {
    std::ostringstream os;
    os << "SimplexPoint: simplex sum " << sum << " not within " << sum_tol
       << " of 1";
    throw ValidationError(os.str());
  }
  for (double& v : r_) v /= sum;
}

SimplexPoint SimplexPoint::vertex(std::size_t m, std::size_t i) {
  if (i >= m) throw ValidationError("SimplexPoint::vertex: index out of range");
  std::vector<double> r(m, 0.0);
  r[i] = 1.0;
  return SimplexPoint(std::move(r));
}

}  // namespace collapse
