#pragma once

// Dense complex linear algebra for small multi-qubit Hilbert spaces.
//
// Basis ordering: |q1 q2 ... qn> with qubit 1 (index 0) as the most
// significant bit, so |000> is index 0 and |100> is index 4.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "contextlab/error.hpp"

namespace contextlab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kDefaultTolerance = 1e-10;

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Number of qubits for a 2^n dimensional space. Throws on other dimensions.
inline std::size_t qubit_count(std::size_t dim) {
  if (!is_power_of_two(dim)) {
    throw DimensionError("dimension " + std::to_string(dim) + " is not a power of two");
  }
  std::size_t n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  return n;
}

/// Largest entrywise |M - M^dagger|.
inline double hermiticity_error(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("cannot compare " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                         " with " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

inline ComplexMatrix identity(std::size_t dim) {
  return ComplexMatrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
}

/// Kronecker product; dimensions multiply.
inline ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// A pure state. Amplitudes are stored as given; use normalized() to rescale.
class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {}

  /// Real amplitudes scaled by a common factor, the way the vectors are usually written down.
  static StateVector from_real(std::initializer_list<double> components, double scale = 1.0) {
    ComplexVector v(static_cast<Eigen::Index>(components.size()));
    Eigen::Index i = 0;
    for (double c : components) v(i++) = Complex(c * scale, 0.0);
    return StateVector(std::move(v));
  }

  static StateVector basis(std::size_t dim, std::size_t index) {
    if (index >= dim) {
      throw IndexError("basis index " + std::to_string(index) + " out of range for dimension " +
                       std::to_string(dim));
    }
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return StateVector(std::move(v));
  }

  static StateVector normalized(ComplexVector amplitudes) {
    const double n = amplitudes.norm();
    if (n == 0.0) throw NormalizationError("cannot normalize the zero vector");
    return StateVector(amplitudes / n);
  }

  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
  double norm() const { return amplitudes_.norm(); }
  bool is_normalized(double tol = kDefaultTolerance) const { return std::abs(norm() - 1.0) <= tol; }

  const ComplexVector& amplitudes() const { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }

  /// <this|other>
  Complex inner(const StateVector& other) const {
    if (dim() != other.dim()) throw DimensionError("inner product of vectors with different dimensions");
    return amplitudes_.dot(other.amplitudes_);
  }

  StateVector evolved(const ComplexMatrix& unitary) const {
    if (static_cast<std::size_t>(unitary.cols()) != dim()) {
      throw DimensionError("operator of size " + std::to_string(unitary.cols()) + " applied to dimension " +
                           std::to_string(dim()));
    }
    return StateVector(unitary * amplitudes_);
  }

 private:
  ComplexVector amplitudes_;
};

/// |v><v| for a unit vector v.
inline ComplexMatrix projector_from_vector(const StateVector& v, double tol = kDefaultTolerance) {
  if (!v.is_normalized(tol)) {
    throw NormalizationError("projector requires a unit vector, got norm " + std::to_string(v.norm()));
  }
  return v.amplitudes() * v.amplitudes().adjoint();
}

/// A mixed state: Hermitian, unit trace, positive semidefinite.
class DensityOperator {
 public:
  static constexpr double kHermitianTol = 1e-12;
  static constexpr double kTraceTol = 1e-12;
  static constexpr double kPositivityTol = 1e-10;

  explicit DensityOperator(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
      throw DimensionError("density operator must be a non-empty square matrix");
    }
    const double herm = hermiticity_error(matrix_);
    if (herm > kHermitianTol) {
      throw HermiticityError("density operator is not Hermitian (max |rho - rho^dagger| = " +
                             std::to_string(herm) + ")");
    }
    const Complex tr = matrix_.trace();
    if (std::abs(tr - Complex(1.0, 0.0)) > kTraceTol) {
      throw NormalizationError("density operator trace is " + std::to_string(tr.real()) + ", expected 1");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(matrix_, Eigen::EigenvaluesOnly);
    const double min_eig = solver.eigenvalues().minCoeff();
    if (min_eig < -kPositivityTol) {
      throw Error("density operator has negative eigenvalue " + std::to_string(min_eig));
    }
  }

  static DensityOperator pure(const StateVector& v) { return DensityOperator(projector_from_vector(v)); }

  static DensityOperator maximally_mixed(std::size_t dim) {
    return DensityOperator(identity(dim) / static_cast<double>(dim));
  }

  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  const ComplexMatrix& matrix() const { return matrix_; }

  double purity() const { return (matrix_ * matrix_).trace().real(); }

  DensityOperator evolved(const ComplexMatrix& unitary) const {
    if (static_cast<std::size_t>(unitary.rows()) != dim()) {
      throw DimensionError("unitary dimension does not match density operator");
    }
    ComplexMatrix m = unitary * matrix_ * unitary.adjoint();
    // Re-symmetrize rounding noise before re-validation.
    m = (m + m.adjoint()) * 0.5;
    return DensityOperator(std::move(m));
  }

 private:
  ComplexMatrix matrix_;
};

/// [[cos t/2, -sin t/2], [sin t/2, cos t/2]], theta in radians.
inline ComplexMatrix rotation_unitary(double theta) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  ComplexMatrix u(2, 2);
  u << c, -s, s, c;
  return u;
}

/// rotation_unitary(theta) on `active_qubit`, identity on the other qubits.
inline ComplexMatrix embed_rotation(double theta, std::size_t active_qubit, std::size_t n_qubits) {
  if (active_qubit >= n_qubits) {
    throw IndexError("qubit " + std::to_string(active_qubit) + " out of range for " +
                     std::to_string(n_qubits) + " qubits");
  }
  ComplexMatrix out = identity(1);
  const ComplexMatrix id2 = identity(2);
  const ComplexMatrix rot = rotation_unitary(theta);
  for (std::size_t q = 0; q < n_qubits; ++q) out = tensor_product(out, q == active_qubit ? rot : id2);
  return out;
}

/// Tr[rho * obs] for a Hermitian observable.
inline double expectation(const DensityOperator& rho, const ComplexMatrix& obs) {
  if (obs.rows() != obs.cols() || static_cast<std::size_t>(obs.rows()) != rho.dim()) {
    throw DimensionError("observable of size " + std::to_string(obs.rows()) + "x" + std::to_string(obs.cols()) +
                         " does not match state dimension " + std::to_string(rho.dim()));
  }
  const double herm = hermiticity_error(obs);
  if (herm > kDefaultTolerance) {
    throw HermiticityError("observable is not Hermitian (max |O - O^dagger| = " + std::to_string(herm) + ")");
  }
  const Complex value = (rho.matrix() * obs).trace();
  if (std::abs(value.imag()) > kDefaultTolerance) {
    throw Error("expectation value has imaginary part " + std::to_string(value.imag()));
  }
  return value.real();
}

/// Normalized Hilbert-Schmidt overlap |Tr[a b]| / sqrt(Tr[a^2] Tr[b^2]).
inline double fidelity(const DensityOperator& a, const DensityOperator& b) {
  if (a.dim() != b.dim()) throw DimensionError("fidelity of states with different dimensions");
  const double pa = a.purity();
  const double pb = b.purity();
  if (pa <= 0.0 || pb <= 0.0) throw Error("fidelity undefined for zero-purity input");
  const double overlap = std::abs((a.matrix() * b.matrix()).trace());
  return std::min(1.0, overlap / std::sqrt(pa * pb));
}

inline double degrees_to_radians(double deg) { return deg * std::numbers::pi / 180.0; }

}  // namespace contextlab
