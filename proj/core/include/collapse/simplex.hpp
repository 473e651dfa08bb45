#pragma once

#include <cstddef>
#include <vector>

#include "collapse/errors.hpp"

namespace collapse {

// Coordinate vector r of a decohered state mu = sum_k r_k P_k, in the
// observable's ascending-eigenvalue order. All coordinates >= 0 (round-off
// down to -1e-12 is clamped) and sum to 1 within sum_tol; stored form is
// renormalized so the sum is exactly 1 up to one final division.
class SimplexPoint {
 public:
  explicit SimplexPoint(std::vector<double> r, double sum_tol = 1e-10);

  std::size_t m() const { return r_.size(); }
  const std::vector<double>& coords() const { return r_; }
  double operator[](std::size_t k) const { return r_[k]; }

  static SimplexPoint vertex(std::size_t m, std::size_t i);

 private:
  std::vector<double> r_;
};

}  // namespace collapse
