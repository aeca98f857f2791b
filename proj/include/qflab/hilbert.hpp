#pragma once
// Finite-dimensional complex linear algebra: state vectors, projective
// measurements, Born probabilities, and the concrete antidistinguishing
// state constructions used by the PBR no-go chain.
//
// Everything here is a value type, immutable after construction, and every
// operation is a pure function. Structural tolerances are 1e-12, aggregate
// (summed) tolerances 1e-9.

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace qflab {

using Complex = std::complex<double>;

inline constexpr double kStructuralTol = 1e-12;
inline constexpr double kAggregateTol = 1e-9;

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

namespace hilbert {

// Dense square complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() : dim_(0) {}
  explicit ComplexMatrix(std::size_t dim) : dim_(dim), a_(dim * dim) {}

  std::size_t dim() const { return dim_; }
  Complex& at(std::size_t r, std::size_t c) { return a_[r * dim_ + c]; }
  const Complex& at(std::size_t r, std::size_t c) const { return a_[r * dim_ + c]; }

  static ComplexMatrix identity(std::size_t dim);

  ComplexMatrix adjoint() const;
  bool is_hermitian(double tol = kStructuralTol) const;
  bool is_unitary(double tol = kStructuralTol) const;
  double trace_real() const;
  Complex trace() const;

  friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  ComplexMatrix scaled(Complex factor) const;

  double max_abs_diff(const ComplexMatrix& other) const;

 private:
  std::size_t dim_;
  std::vector<Complex> a_;
};

// Eigenvalues of a Hermitian matrix, ascending (cyclic Jacobi sweeps;
// plenty for the d <= 36 matrices this project touches).
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(std::vector<Complex> amplitudes);

  std::size_t dim() const { return amp_.size(); }
  const std::vector<Complex>& amplitudes() const { return amp_; }
  const Complex& operator[](std::size_t i) const { return amp_[i]; }

  double norm() const;
  bool is_normalized(double tol = kStructuralTol) const;
  StateVector normalized() const;

  // |i> in a dim-dimensional space.
  static StateVector basis(std::size_t dim, std::size_t index);

 private:
  std::vector<Complex> amp_;
};

// <a|b>: conjugate-linear in the first argument.
Complex inner_product(const StateVector& a, const StateVector& b);

// Row-major tensor product; the first factor's index varies slowest.
StateVector tensor(const StateVector& a, const StateVector& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// |<a|b>| for normalized states; 1 means equal up to global phase.
double fidelity(const StateVector& a, const StateVector& b);
bool equal_up_to_phase(const StateVector& a, const StateVector& b,
                       double tol = kStructuralTol);

// |s><s|
ComplexMatrix projector(const StateVector& s);

StateVector apply_matrix(const ComplexMatrix& m, const StateVector& s);

// Applies a unitary; rejects non-unitary input and dimension mismatch.
StateVector apply_unitary(const ComplexMatrix& u, const StateVector& s);

class DensityOperator {
 public:
  // Validates: Hermitian, trace 1, eigenvalues >= -1e-12.
  explicit DensityOperator(ComplexMatrix matrix);
  static DensityOperator pure(const StateVector& s);

  std::size_t dim() const { return m_.dim(); }
  const ComplexMatrix& matrix() const { return m_; }

 private:
  ComplexMatrix m_;
};

// One POVM element (here always a projector) with its outcome label.
struct Effect {
  // Validates: Hermitian, eigenvalues within [-1e-12, 1 + 1e-12].
  Effect(ComplexMatrix matrix, std::string label);

  ComplexMatrix matrix;
  std::string label;
};

class Measurement {
 public:
  // Validates completeness: effects sum to the identity within 1e-12.
  explicit Measurement(std::vector<Effect> effects);

  std::size_t dim() const { return effects_.front().matrix.dim(); }
  std::size_t outcome_count() const { return effects_.size(); }
  const std::vector<Effect>& effects() const { return effects_; }
  const Effect& effect(std::size_t k) const { return effects_.at(k); }

  std::vector<std::string> outcome_labels() const;

 private:
  std::vector<Effect> effects_;
};

// Tr(rho E); clamped to [0,1] when within 1e-12 of the boundary.
double born_probability(const DensityOperator& rho, const Effect& effect);

// Hermitian observable given by its spectral data. Validates that the
// eigenvectors are orthonormal and reconstruct the matrix within 1e-12.
class Observable {
 public:
  Observable(std::vector<double> eigenvalues, std::vector<StateVector> eigenvectors);

  std::size_t dim() const { return vecs_.front().dim(); }
  std::size_t outcome_count() const { return vals_.size(); }
  const std::vector<double>& eigenvalues() const { return vals_; }
  const std::vector<StateVector>& eigenvectors() const { return vecs_; }
  const ComplexMatrix& matrix() const { return m_; }

  // Projective measurement in this observable's eigenbasis; labels are the
  // eigenvalue strings (or caller-provided).
  Measurement to_measurement() const;
  Measurement to_measurement(std::vector<std::string> labels) const;

 private:
  std::vector<double> vals_;
  std::vector<StateVector> vecs_;
  ComplexMatrix m_;
};

// Qubit basics. up/down span the computational basis; plus/minus the
// conjugate basis with plus = (up+down)/sqrt(2).
StateVector qubit_up();
StateVector qubit_down();
StateVector qubit_plus();
StateVector qubit_minus();
ComplexMatrix pauli_x();

// The four two-qubit product states that a common ontic state would have to
// be compatible with under preparation independence:
//   up(x)up, up(x)plus, plus(x)up, plus(x)plus.
std::vector<StateVector> pbr_product_states();

// The four entangled states antidistinguishing them: <omega_k|chi_k> = 0.
std::vector<StateVector> pbr_basis_states();

// Projective measurement onto pbr_basis_states(), outcome labels "chi1".."chi4".
Measurement pbr_measurement();

// Unitary dilation of a measurement-like interaction: the system's
// eigencomponent k sends the pointer from |init> to the k-th record state,
//   U = sum_k |e_k><e_k| (x) T_k,
// with T_k the transposition (init_index, record_index[k]). Pointer factor
// is second (system index varies slowest).
ComplexMatrix measurement_unitary(const std::vector<StateVector>& eigenvectors,
                                  std::size_t pointer_dim,
                                  std::size_t init_index,
                                  const std::vector<std::size_t>& record_indices);

}  // namespace hilbert
}  // namespace qflab
