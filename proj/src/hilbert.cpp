#include "qflab/hilbert.hpp"

#include <algorithm>
#include <cmath>

namespace qflab::hilbert {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" +
                         std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

// ---- ComplexMatrix ---------------------------------------------------------

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m.at(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix r(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) r.at(j, i) = std::conj(at(i, j));
  return r;
}

bool ComplexMatrix::is_hermitian(double tol) const {
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i; j < dim_; ++j)
      if (std::abs(at(i, j) - std::conj(at(j, i))) > tol) return false;
  return true;
}

bool ComplexMatrix::is_unitary(double tol) const {
  ComplexMatrix prod = adjoint() * (*this);
  return prod.max_abs_diff(identity(dim_)) <= tol;
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += at(i, i);
  return t;
}

double ComplexMatrix::trace_real() const { return trace().real(); }

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a.dim_, b.dim_, "matrix add");
  ComplexMatrix r(a.dim_);
  for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] = a.a_[i] + b.a_[i];
  return r;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a.dim_, b.dim_, "matrix subtract");
  ComplexMatrix r(a.dim_);
  for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] = a.a_[i] - b.a_[i];
  return r;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a.dim_, b.dim_, "matrix multiply");
  ComplexMatrix r(a.dim_);
  for (std::size_t i = 0; i < a.dim_; ++i)
    for (std::size_t k = 0; k < a.dim_; ++k) {
      Complex aik = a.at(i, k);
      if (aik == Complex(0.0)) continue;
      for (std::size_t j = 0; j < a.dim_; ++j) r.at(i, j) += aik * b.at(k, j);
    }
  return r;
}

ComplexMatrix ComplexMatrix::scaled(Complex factor) const {
  ComplexMatrix r(dim_);
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * factor;
  return r;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& other) const {
  require_same_dim(dim_, other.dim_, "matrix compare");
  double worst = 0.0;
  for (std::size_t i = 0; i < a_.size(); ++i)
    worst = std::max(worst, std::abs(a_[i] - other.a_[i]));
  return worst;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  if (!m.is_hermitian(1e-9)) {
    throw ValidationError("hermitian_eigenvalues: matrix is not Hermitian");
  }
  const std::size_t n = m.dim();
  ComplexMatrix a = m;

  // Cyclic complex Jacobi: annihilate a(p,q) with a unitary 2x2 rotation.
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a.at(p, q));
    if (off < 1e-28) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        Complex apq = a.at(p, q);
        if (std::abs(apq) < 1e-16) continue;
        double app = a.at(p, p).real();
        double aqq = a.at(q, q).real();
        double phi = std::arg(apq);
        double theta = 0.5 * std::atan2(2.0 * std::abs(apq), app - aqq);
        Complex c = std::cos(theta);
        Complex s = std::sin(theta) * std::exp(Complex(0.0, phi));
        // Rows/columns p and q of a <- G* a G with G = [[c, s], [-conj(s), c]].
        for (std::size_t k = 0; k < n; ++k) {
          Complex akp = a.at(k, p);
          Complex akq = a.at(k, q);
          a.at(k, p) = akp * c + akq * std::conj(s);
          a.at(k, q) = -akp * s + akq * c;
        }
        for (std::size_t k = 0; k < n; ++k) {
          Complex apk = a.at(p, k);
          Complex aqk = a.at(q, k);
          a.at(p, k) = std::conj(c) * apk + s * aqk;
          a.at(q, k) = -std::conj(s) * apk + c * aqk;
        }
      }
    }
  }

  std::vector<double> vals(n);
  for (std::size_t i = 0; i < n; ++i) vals[i] = a.at(i, i).real();
  std::sort(vals.begin(), vals.end());
  return vals;
}

// ---- StateVector ------------------------------------------------------------

StateVector::StateVector(std::vector<Complex> amplitudes) : amp_(std::move(amplitudes)) {
  if (amp_.empty()) throw ValidationError("state vector needs dimension >= 1");
}

double StateVector::norm() const {
  double s = 0.0;
  for (const Complex& a : amp_) s += std::norm(a);
  return std::sqrt(s);
}

bool StateVector::is_normalized(double tol) const {
  double s = 0.0;
  for (const Complex& a : amp_) s += std::norm(a);
  return std::abs(s - 1.0) <= tol;
}

StateVector StateVector::normalized() const {
  double n = norm();
  if (n == 0.0) throw ValidationError("cannot normalize the zero vector");
  std::vector<Complex> out(amp_);
  for (Complex& a : out) a /= n;
  return StateVector(std::move(out));
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw DimensionError("basis index out of range");
  std::vector<Complex> amp(dim, Complex(0.0));
  amp[index] = 1.0;
  return StateVector(std::move(amp));
}

Complex inner_product(const StateVector& a, const StateVector& b) {
  require_same_dim(a.dim(), b.dim(), "inner_product");
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  std::vector<Complex> out(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) out[i * b.dim() + j] = a[i] * b[j];
  return StateVector(std::move(out));
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix r(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) {
      Complex aij = a.at(i, j);
      if (aij == Complex(0.0)) continue;
      for (std::size_t k = 0; k < b.dim(); ++k)
        for (std::size_t l = 0; l < b.dim(); ++l)
          r.at(i * b.dim() + k, j * b.dim() + l) = aij * b.at(k, l);
    }
  return r;
}

double fidelity(const StateVector& a, const StateVector& b) {
  return std::abs(inner_product(a, b));
}

bool equal_up_to_phase(const StateVector& a, const StateVector& b, double tol) {
  if (a.dim() != b.dim()) return false;
  return fidelity(a, b) >= 1.0 - tol;
}

ComplexMatrix projector(const StateVector& s) {
  ComplexMatrix p(s.dim());
  for (std::size_t i = 0; i < s.dim(); ++i)
    for (std::size_t j = 0; j < s.dim(); ++j) p.at(i, j) = s[i] * std::conj(s[j]);
  return p;
}

StateVector apply_matrix(const ComplexMatrix& m, const StateVector& s) {
  require_same_dim(m.dim(), s.dim(), "apply_matrix");
  std::vector<Complex> out(s.dim(), Complex(0.0));
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) out[i] += m.at(i, j) * s[j];
  return StateVector(std::move(out));
}

StateVector apply_unitary(const ComplexMatrix& u, const StateVector& s) {
  require_same_dim(u.dim(), s.dim(), "apply_unitary");
  if (!u.is_unitary()) throw ValidationError("apply_unitary: matrix is not unitary");
  return apply_matrix(u, s);
}

// ---- DensityOperator / Effect / Measurement ---------------------------------

DensityOperator::DensityOperator(ComplexMatrix matrix) : m_(std::move(matrix)) {
  if (!m_.is_hermitian()) throw ValidationError("density operator must be Hermitian");
  if (std::abs(m_.trace_real() - 1.0) > kStructuralTol ||
      std::abs(m_.trace().imag()) > kStructuralTol) {
    throw ValidationError("density operator must have unit trace");
  }
  for (double ev : hermitian_eigenvalues(m_)) {
    if (ev < -kStructuralTol) {
      throw ValidationError("density operator must be positive semidefinite");
    }
  }
}

DensityOperator DensityOperator::pure(const StateVector& s) {
  if (!s.is_normalized()) throw ValidationError("pure state must be normalized");
  return DensityOperator(projector(s));
}

Effect::Effect(ComplexMatrix mat, std::string lab)
    : matrix(std::move(mat)), label(std::move(lab)) {
  if (!matrix.is_hermitian()) throw ValidationError("effect must be Hermitian");
  for (double ev : hermitian_eigenvalues(matrix)) {
    if (ev < -kStructuralTol || ev > 1.0 + kStructuralTol) {
      throw ValidationError("effect eigenvalues must lie in [0, 1]");
    }
  }
}

Measurement::Measurement(std::vector<Effect> effects) : effects_(std::move(effects)) {
  if (effects_.empty()) throw ValidationError("measurement needs at least one effect");
  const std::size_t d = effects_.front().matrix.dim();
  ComplexMatrix sum(d);
  for (const Effect& e : effects_) {
    require_same_dim(e.matrix.dim(), d, "measurement effect");
    sum = sum + e.matrix;
  }
  if (sum.max_abs_diff(ComplexMatrix::identity(d)) > kStructuralTol) {
    throw ValidationError("measurement effects must sum to the identity");
  }
}

std::vector<std::string> Measurement::outcome_labels() const {
  std::vector<std::string> out;
  out.reserve(effects_.size());
  for (const Effect& e : effects_) out.push_back(e.label);
  return out;
}

double born_probability(const DensityOperator& rho, const Effect& effect) {
  require_same_dim(rho.dim(), effect.matrix.dim(), "born_probability");
  Complex t = (rho.matrix() * effect.matrix).trace();
  double p = t.real();
  if (p < -kAggregateTol || p > 1.0 + kAggregateTol) {
    throw ValidationError("born_probability outside [0,1]: invalid effect for state");
  }
  return std::clamp(p, 0.0, 1.0);
}

// ---- Observable -------------------------------------------------------------

Observable::Observable(std::vector<double> eigenvalues, std::vector<StateVector> eigenvectors)
    : vals_(std::move(eigenvalues)), vecs_(std::move(eigenvectors)) {
  if (vals_.empty() || vals_.size() != vecs_.size()) {
    throw ValidationError("observable needs matching eigenvalue/eigenvector lists");
  }
  const std::size_t d = vecs_.front().dim();
  if (vals_.size() != d) {
    throw ValidationError("observable needs a complete eigenbasis");
  }
  for (std::size_t i = 0; i < vecs_.size(); ++i) {
    require_same_dim(vecs_[i].dim(), d, "observable eigenvector");
    for (std::size_t j = 0; j < vecs_.size(); ++j) {
      Complex ip = inner_product(vecs_[i], vecs_[j]);
      Complex want = (i == j) ? Complex(1.0) : Complex(0.0);
      if (std::abs(ip - want) > kStructuralTol) {
        throw ValidationError("observable eigenvectors must be orthonormal");
      }
    }
  }
  m_ = ComplexMatrix(d);
  for (std::size_t k = 0; k < vals_.size(); ++k) {
    m_ = m_ + projector(vecs_[k]).scaled(vals_[k]);
  }
}

Measurement Observable::to_measurement() const {
  std::vector<std::string> labels;
  labels.reserve(vals_.size());
  for (double v : vals_) {
    std::string s = std::to_string(v);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    labels.push_back(s);
  }
  return to_measurement(std::move(labels));
}

Measurement Observable::to_measurement(std::vector<std::string> labels) const {
  if (labels.size() != vecs_.size()) {
    throw ValidationError("observable measurement needs one label per outcome");
  }
  std::vector<Effect> effects;
  effects.reserve(vecs_.size());
  for (std::size_t k = 0; k < vecs_.size(); ++k) {
    effects.emplace_back(projector(vecs_[k]), labels[k]);
  }
  return Measurement(std::move(effects));
}

// ---- Qubits and the PBR construction ----------------------------------------

StateVector qubit_up() { return StateVector({1.0, 0.0}); }
StateVector qubit_down() { return StateVector({0.0, 1.0}); }
StateVector qubit_plus() { return StateVector({kInvSqrt2, kInvSqrt2}); }
StateVector qubit_minus() { return StateVector({kInvSqrt2, -kInvSqrt2}); }

ComplexMatrix pauli_x() {
  ComplexMatrix x(2);
  x.at(0, 1) = 1.0;
  x.at(1, 0) = 1.0;
  return x;
}

std::vector<StateVector> pbr_product_states() {
  StateVector up = qubit_up();
  StateVector plus = qubit_plus();
  return {tensor(up, up), tensor(up, plus), tensor(plus, up), tensor(plus, plus)};
}

std::vector<StateVector> pbr_basis_states() {
  StateVector up = qubit_up();
  StateVector down = qubit_down();
  StateVector plus = qubit_plus();
  StateVector minus = qubit_minus();
  auto half_sum = [](const StateVector& a, const StateVector& b) {
    std::vector<Complex> amp(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) amp[i] = (a[i] + b[i]) * kInvSqrt2;
    return StateVector(std::move(amp));
  };
  return {
      half_sum(tensor(up, down), tensor(down, up)),
      half_sum(tensor(up, minus), tensor(down, plus)),
      half_sum(tensor(plus, down), tensor(minus, up)),
      half_sum(tensor(plus, minus), tensor(minus, plus)),
  };
}

Measurement pbr_measurement() {
  std::vector<Effect> effects;
  std::vector<StateVector> basis = pbr_basis_states();
  for (std::size_t k = 0; k < basis.size(); ++k) {
    effects.emplace_back(projector(basis[k]), "chi" + std::to_string(k + 1));
  }
  return Measurement(std::move(effects));
}

ComplexMatrix measurement_unitary(const std::vector<StateVector>& eigenvectors,
                                  std::size_t pointer_dim,
                                  std::size_t init_index,
                                  const std::vector<std::size_t>& record_indices) {
  if (eigenvectors.empty()) throw ValidationError("measurement_unitary: no eigenvectors");
  if (record_indices.size() != eigenvectors.size()) {
    throw ValidationError("measurement_unitary: one record index per eigenvector");
  }
  if (init_index >= pointer_dim) throw DimensionError("pointer init index out of range");

  const std::size_t sys_dim = eigenvectors.front().dim();
  ComplexMatrix u(sys_dim * pointer_dim);
  for (std::size_t k = 0; k < eigenvectors.size(); ++k) {
    if (record_indices[k] >= pointer_dim) {
      throw DimensionError("pointer record index out of range");
    }
    // Transposition (init, record_k) on the pointer.
    ComplexMatrix perm = ComplexMatrix::identity(pointer_dim);
    if (record_indices[k] != init_index) {
      perm.at(init_index, init_index) = 0.0;
      perm.at(record_indices[k], record_indices[k]) = 0.0;
      perm.at(init_index, record_indices[k]) = 1.0;
      perm.at(record_indices[k], init_index) = 1.0;
    }
    u = u + kron(projector(eigenvectors[k]), perm);
  }
  if (!u.is_unitary()) {
    throw ValidationError("measurement_unitary: eigenvectors must form an orthonormal basis");
  }
  return u;
}

}  // namespace qflab::hilbert
