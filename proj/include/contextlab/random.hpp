#pragma once

// Seeded generators for random states and operators (property checks).

#include <random>

#include "contextlab/hilbert.hpp"

namespace contextlab {

inline ComplexMatrix random_complex_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = Complex(n(rng), n(rng));
  }
  return m;
}

inline ComplexMatrix random_hermitian(std::size_t dim, std::mt19937_64& rng) {
  const ComplexMatrix g = random_complex_matrix(dim, dim, rng);
  return (g + g.adjoint()) * 0.5;
}

inline StateVector random_pure_state(std::size_t dim, std::mt19937_64& rng) {
  return StateVector::normalized(random_complex_matrix(dim, 1, rng).col(0));
}

/// Ginibre ensemble: G G^dagger / Tr[G G^dagger], full rank with probability one.
inline DensityOperator random_density_operator(std::size_t dim, std::mt19937_64& rng) {
  const ComplexMatrix g = random_complex_matrix(dim, dim, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = (rho + rho.adjoint()) * 0.5;
  return DensityOperator(std::move(rho));
}

}  // namespace contextlab
