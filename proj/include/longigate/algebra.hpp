// Copyright 2026 The longigate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "longigate/error.hpp"

namespace longigate {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<cplx>;

inline constexpr cplx kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

enum class FactorKind { qubit, oscillator };

struct Factor {
  FactorKind kind;
  int dim;

  friend bool operator==(const Factor&, const Factor&) = default;
};

/**
 * Ordered tensor product of qubits and truncated oscillators.
 *
 * Factor 0 is the slowest-varying index of the flattened basis, so a basis
 * label (q1, q2, n) maps to q1 * (2 * N) + q2 * N + n.
 */
class HilbertSpace {
 public:
  HilbertSpace() = default;

  explicit HilbertSpace(std::vector<Factor> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw Error(ErrorCode::invalid_argument, "HilbertSpace needs at least one factor");
    total_ = 1;
    for (const auto& f : factors_) {
      if (f.kind == FactorKind::qubit && f.dim != 2)
        throw Error(ErrorCode::invalid_argument, "qubit factor must have dim 2");
      if (f.kind == FactorKind::oscillator && f.dim < 2)
        throw Error(ErrorCode::invalid_argument, "oscillator factor must have dim >= 2");
      total_ *= f.dim;
    }
  }

  /// Qubits first, then oscillators with the given cutoffs.
  static HilbertSpace qubits_then_oscillators(int qubits, std::span<const int> cutoffs) {
    std::vector<Factor> fs;
    for (int q = 0; q < qubits; ++q) fs.push_back({FactorKind::qubit, 2});
    for (int c : cutoffs) fs.push_back({FactorKind::oscillator, c});
    return HilbertSpace(std::move(fs));
  }

  const std::vector<Factor>& factors() const { return factors_; }
  std::size_t num_factors() const { return factors_.size(); }
  Eigen::Index dim() const { return total_; }
  int dim(std::size_t factor) const { return factors_.at(factor).dim; }

  /// Product of dims of the factors strictly after `factor`.
  Eigen::Index stride(std::size_t factor) const {
    Eigen::Index s = 1;
    for (std::size_t k = factor + 1; k < factors_.size(); ++k) s *= factors_[k].dim;
    return s;
  }

  std::vector<std::size_t> factors_of_kind(FactorKind kind) const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < factors_.size(); ++k)
      if (factors_[k].kind == kind) out.push_back(k);
    return out;
  }

  /// True when all qubits precede all oscillators (the layout the block solvers rely on).
  bool qubits_leading() const {
    bool seen_osc = false;
    for (const auto& f : factors_) {
      if (f.kind == FactorKind::oscillator) seen_osc = true;
      else if (seen_osc) return false;
    }
    return true;
  }

  friend bool operator==(const HilbertSpace& a, const HilbertSpace& b) { return a.factors_ == b.factors_; }

 private:
  std::vector<Factor> factors_;
  Eigen::Index total_ = 0;
};

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline double hermiticity_defect(const Matrix& m) { return max_abs(m - m.adjoint()); }

inline bool all_finite(const Matrix& m) {
  for (Eigen::Index k = 0; k < m.size(); ++k)
    if (!std::isfinite(m.data()[k].real()) || !std::isfinite(m.data()[k].imag())) return false;
  return true;
}

/// Dense operator on a labeled tensor-product space.
class Operator {
 public:
  Operator() = default;
  Operator(HilbertSpace space, Matrix data) : space_(std::move(space)), data_(std::move(data)) {
    if (data_.rows() != space_.dim() || data_.cols() != space_.dim())
      throw Error(ErrorCode::dimension_mismatch, "operator matrix does not match space dimension");
  }

  static Operator identity(const HilbertSpace& space) {
    return {space, Matrix::Identity(space.dim(), space.dim())};
  }
  static Operator zero(const HilbertSpace& space) { return {space, Matrix::Zero(space.dim(), space.dim())}; }

  const HilbertSpace& space() const { return space_; }
  const Matrix& matrix() const { return data_; }
  Eigen::Index dim() const { return data_.rows(); }

  Operator adjoint() const { return {space_, data_.adjoint()}; }

  /// ‖A − A†‖_max ≤ rel_tol · ‖A‖_max
  bool is_hermitian(double rel_tol = 1e-12) const {
    return hermiticity_defect(data_) <= rel_tol * std::max(max_abs(data_), 1e-300);
  }

  Operator& operator+=(const Operator& o) {
    require_same_space(o);
    data_ += o.data_;
    return *this;
  }
  Operator& operator-=(const Operator& o) {
    require_same_space(o);
    data_ -= o.data_;
    return *this;
  }
  Operator& operator*=(cplx s) {
    data_ *= s;
    return *this;
  }

  friend Operator operator+(Operator a, const Operator& b) { return a += b; }
  friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
  friend Operator operator*(cplx s, Operator a) { return a *= s; }
  friend Operator operator*(Operator a, cplx s) { return a *= s; }
  friend Operator operator*(const Operator& a, const Operator& b) {
    a.require_same_space(b);
    return {a.space_, a.data_ * b.data_};
  }

 private:
  void require_same_space(const Operator& o) const {
    if (!(space_ == o.space_)) throw Error(ErrorCode::dimension_mismatch, "operators live on different spaces");
  }

  HilbertSpace space_;
  Matrix data_;
};

inline Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

inline double min_hermitian_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

/// ½ Σ|λ| of the Hermitian part of a − b.
inline double trace_distance(const Matrix& a, const Matrix& b) {
  const Matrix d = a - b;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (d + d.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

struct StateTolerances {
  double trace = 1e-8;
  double hermiticity = 1e-8;
  double min_eigenvalue = -1e-7;
};

/// Joint density operator; construction checks unit trace, hermiticity and positivity.
class DensityState {
 public:
  using Tolerances = StateTolerances;

  DensityState() = default;
  DensityState(HilbertSpace space, Matrix data, Tolerances tol = {}) : space_(std::move(space)), data_(std::move(data)) {
    if (data_.rows() != space_.dim() || data_.cols() != space_.dim())
      throw Error(ErrorCode::dimension_mismatch, "density matrix does not match space dimension");
    if (!all_finite(data_)) throw Error(ErrorCode::non_finite, "density matrix has non-finite entries");
    if (std::abs(data_.trace() - cplx(1.0)) > tol.trace)
      throw Error(ErrorCode::unphysical_state, "density matrix trace deviates from 1");
    if (hermiticity_defect(data_) > tol.hermiticity)
      throw Error(ErrorCode::unphysical_state, "density matrix is not Hermitian");
    if (min_hermitian_eigenvalue(data_) < tol.min_eigenvalue)
      throw Error(ErrorCode::unphysical_state, "density matrix has a negative eigenvalue");
  }

  static DensityState pure(const HilbertSpace& space, const Vector& ket) {
    if (ket.size() != space.dim()) throw Error(ErrorCode::dimension_mismatch, "ket does not match space dimension");
    const Vector k = ket / ket.norm();
    return {space, k * k.adjoint()};
  }

  const HilbertSpace& space() const { return space_; }
  const Matrix& matrix() const { return data_; }
  double purity() const { return (data_ * data_).trace().real(); }
  cplx expectation(const Operator& op) const { return (op.matrix() * data_).trace(); }

 private:
  HilbertSpace space_;
  Matrix data_;
};

// ---------------------------------------------------------------------------
// Local operators. Qubit convention: |0⟩ is the +1 eigenstate of σ_z.

inline Matrix annihilation(int dim) {
  if (dim < 2) throw Error(ErrorCode::invalid_argument, "Fock cutoff must be >= 2");
  Matrix a = Matrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

inline Matrix creation(int dim) { return annihilation(dim).adjoint(); }

inline Matrix number_operator(int dim) { return creation(dim) * annihilation(dim); }

inline Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}
inline Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
/// Lowers the qubit from |0⟩ (energy +ω/2) to |1⟩.
inline Matrix sigma_minus() {
  Matrix m = Matrix::Zero(2, 2);
  m(1, 0) = 1.0;
  return m;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// identity ⊗ … ⊗ local ⊗ … ⊗ identity
inline Operator embed(const Matrix& local, std::size_t target_factor, const HilbertSpace& space) {
  if (target_factor >= space.num_factors())
    throw Error(ErrorCode::invalid_argument, "factor index out of range");
  const int d = space.dim(target_factor);
  if (local.rows() != d || local.cols() != d)
    throw Error(ErrorCode::dimension_mismatch, "local operator does not match factor dimension");
  Eigen::Index left = 1;
  for (std::size_t k = 0; k < target_factor; ++k) left *= space.dim(k);
  const Eigen::Index right = space.stride(target_factor);
  Matrix out = Matrix::Zero(space.dim(), space.dim());
  for (Eigen::Index l = 0; l < left; ++l)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const cplx v = local(i, j);
        if (v == cplx(0.0)) continue;
        const Eigen::Index row0 = (l * d + i) * right;
        const Eigen::Index col0 = (l * d + j) * right;
        for (Eigen::Index r = 0; r < right; ++r) out(row0 + r, col0 + r) = v;
      }
  return {space, std::move(out)};
}

/**
 * Partial trace keeping the listed factors (in ascending order).
 * Works for any square operator, not only density matrices.
 */
inline Matrix partial_trace(const Matrix& rho, const HilbertSpace& space, std::vector<std::size_t> keep) {
  if (rho.rows() != space.dim() || rho.cols() != space.dim())
    throw Error(ErrorCode::dimension_mismatch, "partial_trace: matrix does not match space");
  std::sort(keep.begin(), keep.end());
  const std::size_t nf = space.num_factors();
  std::vector<bool> kept(nf, false);
  for (auto k : keep) {
    if (k >= nf) throw Error(ErrorCode::invalid_argument, "partial_trace: factor index out of range");
    kept[k] = true;
  }
  Eigen::Index keep_dim = 1, trace_dim = 1;
  for (std::size_t k = 0; k < nf; ++k) (kept[k] ? keep_dim : trace_dim) *= space.dim(k);

  // Split a global index into (kept, traced) sub-indices.
  std::vector<Eigen::Index> kept_part(space.dim()), traced_part(space.dim());
  for (Eigen::Index g = 0; g < space.dim(); ++g) {
    Eigen::Index rem = g, kidx = 0, tidx = 0, kmul = 1, tmul = 1;
    for (std::size_t k = nf; k-- > 0;) {
      const int d = space.dim(k);
      const Eigen::Index digit = rem % d;
      rem /= d;
      if (kept[k]) {
        kidx += digit * kmul;
        kmul *= d;
      } else {
        tidx += digit * tmul;
        tmul *= d;
      }
    }
    kept_part[g] = kidx;
    traced_part[g] = tidx;
  }
  // Invert: (kept, traced) -> global.
  std::vector<Eigen::Index> global(space.dim());
  for (Eigen::Index g = 0; g < space.dim(); ++g) global[kept_part[g] * trace_dim + traced_part[g]] = g;

  Matrix out = Matrix::Zero(keep_dim, keep_dim);
  for (Eigen::Index i = 0; i < keep_dim; ++i)
    for (Eigen::Index j = 0; j < keep_dim; ++j) {
      cplx s = 0.0;
      for (Eigen::Index t = 0; t < trace_dim; ++t) s += rho(global[i * trace_dim + t], global[j * trace_dim + t]);
      out(i, j) = s;
    }
  return out;
}

// ---------------------------------------------------------------------------
// Matrix exponentials

inline Matrix expm(const Matrix& a) {
  if (!all_finite(a)) throw Error(ErrorCode::non_finite, "expm: non-finite entries");
  return a.exp();
}

inline Operator expm(const Operator& a) { return {a.space(), expm(a.matrix())}; }

/// e^A B e^{−A}
inline Operator expm_apply(const Operator& a, const Operator& b) {
  if (!(a.space() == b.space())) throw Error(ErrorCode::dimension_mismatch, "expm_apply: space mismatch");
  const Matrix ea = expm(a.matrix());
  const Matrix ema = expm(Matrix(-a.matrix()));
  return {a.space(), ea * b.matrix() * ema};
}

/// D(α)|0⟩ in a truncated Fock space, using the exact truncated displacement unitary.
inline Vector coherent_ket(int dim, cplx alpha) {
  const Matrix a = annihilation(dim);
  const Matrix gen = alpha * a.adjoint() - std::conj(alpha) * a;
  Vector vac = Vector::Zero(dim);
  vac(0) = 1.0;
  return expm(gen) * vac;
}

inline Vector basis_ket(Eigen::Index dim, Eigen::Index index) {
  Vector v = Vector::Zero(dim);
  v(index) = 1.0;
  return v;
}

inline SparseMatrix to_sparse(const Matrix& m) {
  std::vector<Eigen::Triplet<cplx>> trips;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (m(i, j) != cplx(0.0)) trips.emplace_back(i, j, m(i, j));
  SparseMatrix s(m.rows(), m.cols());
  s.setFromTriplets(trips.begin(), trips.end());
  return s;
}

}  // namespace longigate
