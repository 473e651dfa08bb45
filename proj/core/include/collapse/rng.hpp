#pragma once

#include <cstdint>
#include <random>

#include "collapse/matrix.hpp"
#include "collapse/simplex.hpp"

namespace collapse {

// Deterministic, order-independent randomness: every Monte Carlo trial owns
// the stream (seed, stream_id = trial index). Engine seeding goes through
// std::seed_seq and all variate transforms below are written out explicitly,
// because std::*_distribution algorithms are implementation-defined and
// would break the byte-identical-output contract across standard libraries.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  std::mt19937_64 make_engine() const;
};

// [0, 1), 53-bit resolution
double uniform01(std::mt19937_64& eng);

// unit-rate exponential via inverse CDF
double exponential1(std::mt19937_64& eng);

// standard normal via Box-Muller (one value per call, no cached spare)
double gaussian(std::mt19937_64& eng);

// m unit exponentials normalized by their sum: the flat Dirichlet law,
// i.e. Lebesgue-uniform on the (m-1)-simplex
SimplexPoint sample_simplex_uniform(std::size_t m, std::mt19937_64& eng);

// GUE-scaled Hermitian matrix, entries O(1)
ComplexMatrix random_hermitian(Eigen::Index n, std::mt19937_64& eng);

// G G^dag / Tr(G G^dag) with Ginibre G: full rank almost surely
DensityMatrix random_density(Eigen::Index n, std::mt19937_64& eng);

}  // namespace collapse
