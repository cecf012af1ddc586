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

#include <gtest/gtest.h>

#include <random>

#include "longigate/algebra.hpp"

namespace lg = longigate;
using lg::cplx;
using lg::Matrix;
using lg::Vector;

namespace {

Matrix random_matrix(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cplx(nd(rng), nd(rng));
  return m;
}

// Plain Taylor series with scaling and squaring by 2^s; independent of Eigen's Padé route.
Matrix taylor_expm(const Matrix& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int s = 0;
  while (norm / std::pow(2.0, s) > 0.25) ++s;
  const Matrix b = a / std::pow(2.0, s);
  Matrix term = Matrix::Identity(a.rows(), a.cols()), sum = term;
  for (int k = 1; k < 40; ++k) {
    term = term * b / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

}  // namespace

TEST(Ladder, CanonicalCommutatorBelowCutoff) {
  for (int dim : {2, 5, 12}) {
    const Matrix c = lg::annihilation(dim) * lg::creation(dim) - lg::creation(dim) * lg::annihilation(dim);
    EXPECT_LT(lg::max_abs(c.topLeftCorner(dim - 1, dim - 1) - Matrix::Identity(dim - 1, dim - 1)), 1e-14);
    EXPECT_NEAR(c(dim - 1, dim - 1).real(), -(dim - 1.0), 1e-12);
  }
}

TEST(Ladder, NumberOperatorIsDiagonalCount) {
  const Matrix n = lg::number_operator(7);
  for (int k = 0; k < 7; ++k) EXPECT_NEAR(n(k, k).real(), k, 1e-14);
  EXPECT_LT(lg::max_abs(n - Matrix(n.diagonal().asDiagonal())), 1e-14);
}

TEST(Ladder, RejectsTinyCutoff) { EXPECT_THROW(lg::annihilation(1), lg::Error); }

TEST(Pauli, Algebra) {
  const Matrix x = lg::pauli_x(), y = lg::pauli_y(), z = lg::pauli_z();
  EXPECT_LT(lg::max_abs(x * y - lg::kI * z), 1e-15);
  EXPECT_NEAR(z(0, 0).real(), 1.0, 0.0);  // |0> is the +1 eigenstate
  const Matrix sm = lg::sigma_minus();
  EXPECT_EQ(sm(1, 0), cplx(1.0));
  EXPECT_LT(lg::max_abs(sm - 0.5 * (x - lg::kI * y)), 1e-15);
}

TEST(Expm, MatchesTaylorOracle) {
  for (unsigned seed : {1u, 2u, 3u}) {
    const Matrix a = random_matrix(6, seed) * 0.7;
    EXPECT_LT(lg::max_abs(lg::expm(a) - taylor_expm(a)), 1e-11) << "seed " << seed;
  }
}

TEST(Expm, AntiHermitianGivesUnitary) {
  Matrix h = random_matrix(8, 9);
  h = (h + h.adjoint()).eval();
  const Matrix u = lg::expm(Matrix(-lg::kI * h));
  EXPECT_LT(lg::max_abs(u * u.adjoint() - Matrix::Identity(8, 8)), 1e-12);
}

TEST(Expm, RejectsNonFinite) {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 1) = std::nan("");
  EXPECT_THROW(lg::expm(a), lg::Error);
}

TEST(Coherent, MatchesFockExpansion) {
  const cplx alpha(0.1, -0.05);
  const Vector k = lg::coherent_ket(20, alpha);
  for (int n = 0; n < 10; ++n) {
    const cplx want = std::exp(-0.5 * std::norm(alpha)) * std::pow(alpha, n) / std::sqrt(factorial(n));
    EXPECT_LT(std::abs(k(n) - want), 1e-12) << n;
  }
}

TEST(Coherent, DisplacementMean) {
  const Matrix a = lg::annihilation(20);
  const Vector k = lg::coherent_ket(20, cplx(0.1, 0.0));
  EXPECT_LT(std::abs(cplx(k.adjoint() * a * k) - cplx(0.1)), 1e-8);
}

TEST(Space, StridesFollowSlowestFirst) {
  const int cut[] = {5};
  const auto s = lg::HilbertSpace::qubits_then_oscillators(2, cut);
  EXPECT_EQ(s.dim(), 20);
  EXPECT_EQ(s.stride(0), 10);
  EXPECT_EQ(s.stride(1), 5);
  EXPECT_EQ(s.stride(2), 1);
  EXPECT_TRUE(s.qubits_leading());
  EXPECT_THROW(lg::HilbertSpace({{lg::FactorKind::qubit, 3}}), lg::Error);
}

// Index oracle: entry (i, j) of embed(L, f) is L(i_f, j_f) when all other digits agree.
TEST(Space, EmbedMatchesIndexOracle) {
  const int cut[] = {3};
  const auto s = lg::HilbertSpace::qubits_then_oscillators(2, cut);
  const Matrix local = random_matrix(3, 5);
  const Matrix e = lg::embed(local, 2, s).matrix();
  const Matrix z = lg::embed(lg::pauli_z(), 1, s).matrix();
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) {
      const int qi = i / 3, qj = j / 3, ni = i % 3, nj = j % 3;
      EXPECT_EQ(e(i, j), qi == qj ? local(ni, nj) : cplx(0.0));
      const int q2 = (i / 3) % 2;
      EXPECT_EQ(z(i, j), i == j ? cplx(q2 == 0 ? 1.0 : -1.0) : cplx(0.0));
    }
}

TEST(Space, EmbedEqualsKron) {
  const int cut[] = {4};
  const auto s = lg::HilbertSpace::qubits_then_oscillators(2, cut);
  const Matrix i2 = Matrix::Identity(2, 2);
  EXPECT_LT(lg::max_abs(lg::embed(lg::pauli_x(), 0, s).matrix() -
                        lg::kron(lg::kron(lg::pauli_x(), i2), Matrix::Identity(4, 4))),
            1e-15);
}

TEST(PartialTrace, ProductStateFactors) {
  const int cut[] = {3};
  const auto s = lg::HilbertSpace::qubits_then_oscillators(2, cut);
  Matrix r1 = random_matrix(2, 11);
  r1 = r1 * r1.adjoint();
  r1 /= r1.trace();
  Matrix r2 = random_matrix(2, 12);
  r2 = r2 * r2.adjoint();
  r2 /= r2.trace();
  Matrix r3 = random_matrix(3, 13);
  r3 = r3 * r3.adjoint();
  r3 /= r3.trace();
  const Matrix rho = lg::kron(lg::kron(r1, r2), r3);
  EXPECT_LT(lg::max_abs(lg::partial_trace(rho, s, {0}) - r1), 1e-14);
  EXPECT_LT(lg::max_abs(lg::partial_trace(rho, s, {2}) - r3), 1e-14);
  EXPECT_LT(lg::max_abs(lg::partial_trace(rho, s, {0, 1}) - lg::kron(r1, r2)), 1e-14);
  EXPECT_LT(lg::max_abs(lg::partial_trace(rho, s, {0, 2}) - lg::kron(r1, r3)), 1e-14);
}

TEST(DensityState, ChecksPhysicality) {
  const int cut[] = {2};
  const auto s = lg::HilbertSpace::qubits_then_oscillators(1, cut);
  Matrix good = Matrix::Identity(4, 4) / 4.0;
  EXPECT_NO_THROW(lg::DensityState(s, good));
  EXPECT_THROW(lg::DensityState(s, Matrix(good * 2.0)), lg::Error);
  Matrix nonherm = good;
  nonherm(0, 1) = 0.1;
  EXPECT_THROW(lg::DensityState(s, nonherm), lg::Error);
  Matrix neg = Matrix::Zero(4, 4);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  EXPECT_THROW(lg::DensityState(s, neg), lg::Error);
  EXPECT_THROW(lg::DensityState(s, Matrix::Identity(3, 3) / 3.0), lg::Error);
}

TEST(DensityState, PurityAndTraceDistance) {
  const int cut[] = {2};
  const auto s = lg::HilbertSpace::qubits_then_oscillators(1, cut);
  const auto a = lg::DensityState::pure(s, lg::basis_ket(4, 0));
  const auto b = lg::DensityState::pure(s, lg::basis_ket(4, 3));
  EXPECT_NEAR(a.purity(), 1.0, 1e-15);
  EXPECT_NEAR(lg::trace_distance(a.matrix(), b.matrix()), 1.0, 1e-14);
  EXPECT_NEAR(lg::trace_distance(a.matrix(), a.matrix()), 0.0, 1e-15);
}

TEST(Operator, SpaceMismatchThrows) {
  const int c2[] = {2}, c3[] = {3};
  const auto s2 = lg::HilbertSpace::qubits_then_oscillators(1, c2);
  const auto s3 = lg::HilbertSpace::qubits_then_oscillators(1, c3);
  EXPECT_THROW(lg::Operator::identity(s2) + lg::Operator::identity(s3), lg::Error);
  EXPECT_TRUE(lg::Operator::identity(s2).is_hermitian());
}

TEST(Operator, ExpmApplyConjugates) {
  const int cut[] = {6};
  const auto s = lg::HilbertSpace::qubits_then_oscillators(1, cut);
  const lg::Operator a = lg::embed(lg::annihilation(6), 1, s);
  const lg::Operator n = lg::embed(lg::number_operator(6), 1, s);
  const double phi = 0.3;
  // e^{iφn} a e^{−iφn} = e^{−iφ} a
  const lg::Operator r = lg::expm_apply(lg::Operator(s, lg::kI * phi * n.matrix()), a);
  EXPECT_LT(lg::max_abs(r.matrix() - std::exp(-lg::kI * phi) * a.matrix()), 1e-12);
}
