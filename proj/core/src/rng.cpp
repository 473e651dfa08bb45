#include "collapse/rng.hpp"

#include <cmath>
#include <numbers>

namespace collapse {

std::mt19937_64 RngStream::make_engine() const {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32)};
  return std::mt19937_64(seq);
}

double uniform01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

double exponential1(std::mt19937_64& eng) {
  // 1 - u in (0, 1], so the log argument never vanishes
  return -std::log(1.0 - uniform01(eng));
}

double gaussian(std::mt19937_64& eng) {
  double u1 = uniform01(eng);
  while (u1 == 0.0) u1 = uniform01(eng);
  const double u2 = uniform01(eng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

SimplexPoint sample_simplex_uniform(std::size_t m, std::mt19937_64& eng) {
  if (m < 2) throw ValidationError("sample_simplex_uniform: m must be >= 2");
  std::vector<double> r(m);
  double sum = 0.0;
  for (double& v : r) {
    v = exponential1(eng);
    sum += v;
  }
  for (double& v : r) v /= sum;
  return SimplexPoint(std::move(r));
}

ComplexMatrix random_hermitian(Eigen::Index n, std::mt19937_64& eng) {
  ComplexMatrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      g(i, j) = Complex(gaussian(eng), gaussian(eng));
    }
  }
  return hermitian_part(g) / std::sqrt(static_cast<double>(n));
}

DensityMatrix random_density(Eigen::Index n, std::mt19937_64& eng) {
  ComplexMatrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      g(i, j) = Complex(gaussian(eng), gaussian(eng));
    }
  }
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix::validated(hermitian_part(rho));
}

}  // namespace collapse
