// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "bellcert/qcore.hpp"
#include "bellcert/random.hpp"

using namespace bellcert;

namespace {

const double kSqrt2 = std::sqrt(2.0);

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return a.max_abs_diff(b); }

PureState random_two_qubit(CounterStream& rng) { return random_pure_state(4, rng); }

// Schmidt-form state cos t |00> + sin t |11>
PureState schmidt(double t) {
  return PureState({std::cos(t), 0, 0, std::sin(t)});
}

}  // namespace

TEST(ComplexMatrix, RejectsMismatchedEntries) {
  EXPECT_THROW(ComplexMatrix(2, 2, std::vector<cplx>(3)), std::invalid_argument);
  EXPECT_THROW(ComplexMatrix(2, 2) * ComplexMatrix(3, 3), std::invalid_argument);
}

TEST(ComplexMatrix, KronOfPaulis) {
  const auto zz = kron(pauli(3), pauli(3));
  EXPECT_EQ(zz(0, 0), cplx(1));
  EXPECT_EQ(zz(1, 1), cplx(-1));
  EXPECT_EQ(zz(3, 3), cplx(1));
}

TEST(TraceNorm, Examples) {
  EXPECT_NEAR(trace_norm(ComplexMatrix{{1, 0}, {0, -1}}), 2, 1e-14);
  EXPECT_NEAR(trace_norm(ComplexMatrix(2, 2)), 0, 1e-14);
  EXPECT_NEAR(trace_norm(0.5 * (pauli(1) + pauli(3))), kSqrt2, 1e-14);
}

TEST(TraceNorm, RejectsNonHermitian) {
  EXPECT_THROW(trace_norm(ComplexMatrix{{0, 1}, {0, 0}}), std::invalid_argument);
  EXPECT_THROW(trace_norm(ComplexMatrix(2, 3)), std::invalid_argument);
}

TEST(TraceNorm, DominatesTrace) {
  CounterStream rng(7, 0);
  for (int i = 0; i < 200; ++i) {
    const std::size_t d = 2 + rng.below(4);
    ComplexMatrix a(d, d);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) a(r, c) = cplx(rng.normal(), rng.normal());
    const ComplexMatrix h = a + a.adjoint();
    EXPECT_GE(trace_norm(h) + 1e-12, std::abs(h.trace()));
  }
}

TEST(Eigen, ReconstructsRandomHermitian) {
  CounterStream rng(9, 0);
  for (int i = 0; i < 50; ++i) {
    const std::size_t d = 2 + rng.below(7);
    ComplexMatrix a(d, d);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) a(r, c) = cplx(rng.normal(), rng.normal());
    const ComplexMatrix h = a + a.adjoint();
    const auto e = hermitian_eigen(h);
    ComplexMatrix rec = e.vectors * ComplexMatrix::diagonal(e.values) * e.vectors.adjoint();
    EXPECT_LT(max_abs_diff(rec, h), 1e-10 * h.max_abs());
    for (std::size_t k = 1; k < d; ++k) EXPECT_LE(e.values[k - 1], e.values[k]);
  }
}

TEST(PartialTrace, Examples) {
  const DensityOperator phi(bell_state());
  const std::array<std::size_t, 2> dims{2, 2};
  const std::array<std::size_t, 1> keep_b{1};
  const auto rb = partial_trace(phi.matrix(), dims, keep_b);
  EXPECT_LT(max_abs_diff(rb, 0.5 * ComplexMatrix::identity(2)), 1e-15);

  const DensityOperator zero(basis_state(4, 0));
  const auto rb0 = partial_trace(zero.matrix(), dims, keep_b);
  EXPECT_LT(max_abs_diff(rb0, ComplexMatrix{{1, 0}, {0, 0}}), 1e-15);
}

TEST(PartialTrace, RejectsInconsistentDims) {
  const DensityOperator phi(bell_state());
  const std::array<std::size_t, 2> dims{2, 3};
  const std::array<std::size_t, 1> keep{0};
  EXPECT_THROW(partial_trace(phi.matrix(), dims, keep), std::invalid_argument);
}

TEST(PartialTrace, SchmidtSpectraAgree) {
  CounterStream rng(11, 0);
  const std::array<std::size_t, 2> dims{2, 2};
  const std::array<std::size_t, 1> ka{0}, kb{1};
  for (int i = 0; i < 100; ++i) {
    const DensityOperator rho(random_two_qubit(rng));
    const auto ea = eigenvalues(partial_trace(rho.matrix(), dims, ka));
    const auto eb = eigenvalues(partial_trace(rho.matrix(), dims, kb));
    EXPECT_NEAR(ea[0], eb[0], 1e-12);
    EXPECT_NEAR(ea[1], eb[1], 1e-12);
    EXPECT_GT(ea[1], 0);
  }
}

TEST(PartialTrace, TraceAndPositivityPreserved) {
  CounterStream rng(12, 0);
  const std::array<std::size_t, 3> dims{2, 3, 2};
  for (int i = 0; i < 50; ++i) {
    const DensityOperator rho(random_pure_state(12, rng));
    for (std::size_t k = 0; k < 3; ++k) {
      const std::array<std::size_t, 1> keep{k};
      const auto r = partial_trace(rho.matrix(), dims, keep);
      EXPECT_NEAR(r.trace().real(), 1, 1e-12);
      EXPECT_GE(eigenvalues(r).front(), -1e-12);
    }
  }
}

TEST(Bloch, Examples) {
  const auto phi = bloch_decompose(DensityOperator(bell_state()));
  EXPECT_NEAR(norm(phi.a), 0, 1e-15);
  EXPECT_NEAR(norm(phi.b), 0, 1e-15);
  EXPECT_NEAR(phi.T[0][0], 1, 1e-15);
  EXPECT_NEAR(phi.T[1][1], -1, 1e-15);
  EXPECT_NEAR(phi.T[2][2], 1, 1e-15);
  EXPECT_NEAR(phi.C, 1, 1e-12);

  const auto mixed = bloch_decompose(DensityOperator(0.25 * ComplexMatrix::identity(4)));
  for (auto& row : mixed.T)
    for (double t : row) EXPECT_NEAR(t, 0, 1e-15);

  const auto zero = bloch_decompose(DensityOperator(basis_state(4, 0)));
  EXPECT_NEAR(zero.a[2], 1, 1e-15);
  EXPECT_NEAR(zero.b[2], 1, 1e-15);
  EXPECT_NEAR(zero.T[2][2], 1, 1e-15);
  EXPECT_NEAR(zero.T[0][0], 0, 1e-15);
  EXPECT_NEAR(zero.C, 0, 1e-12);
}

TEST(Bloch, RejectsWrongDimension) {
  EXPECT_THROW(bloch_decompose(DensityOperator(basis_state(3, 0))), std::invalid_argument);
}

TEST(Bloch, RoundTrip) {
  CounterStream rng(13, 0);
  for (int i = 0; i < 100; ++i) {
    // random mixed state: mixture of two random pure states
    const double p = rng.uniform();
    const ComplexMatrix m = p * random_two_qubit(rng).projector() + (1 - p) * random_two_qubit(rng).projector();
    const DensityOperator rho(m);
    const auto s = bloch_decompose(rho);
    EXPECT_LT(max_abs_diff(bloch_reconstruct(s.a, s.b, s.T), rho.matrix()), 1e-10);
  }
}

TEST(Concurrence, Examples) {
  EXPECT_NEAR(concurrence(DensityOperator(bell_state())), 1, 1e-10);
  EXPECT_NEAR(concurrence(DensityOperator(basis_state(4, 0))), 0, 1e-10);
  for (double t : {0.1, 0.3, 0.5, 0.7}) {
    EXPECT_NEAR(concurrence(DensityOperator(schmidt(t))), std::sin(2 * t), 1e-9);
    EXPECT_NEAR(pure_concurrence(schmidt(t), 2, 2), std::sin(2 * t), 1e-12);
  }
}

TEST(Concurrence, WernerState) {
  // p |Phi><Phi| + (1-p) I/4 has C = max(0, (3p-1)/2)
  for (double p : {0.2, 1.0 / 3, 0.5, 0.9}) {
    const ComplexMatrix m = p * bell_state().projector() + (0.25 * (1 - p)) * ComplexMatrix::identity(4);
    EXPECT_NEAR(concurrence(DensityOperator(m)), std::max(0.0, (3 * p - 1) / 2), 1e-9);
  }
}

TEST(PureTwoQubit, SingularValuesAndFidelity) {
  CounterStream rng(17, 0);
  for (int i = 0; i < 1000; ++i) {
    const PureState psi = random_two_qubit(rng);
    const auto s = bloch_decompose(DensityOperator(psi));
    const double C = pure_concurrence(psi, 2, 2);
    const Vec3 sv = singular_values(s.T);
    EXPECT_NEAR(sv[0], 1, 1e-8);
    EXPECT_NEAR(sv[1], C, 1e-8);
    EXPECT_NEAR(sv[2], C, 1e-8);
    EXPECT_NEAR(reduced_fidelity(psi, 2, 2), (1 + C) / 2, 1e-8);
    EXPECT_NEAR(s.C, C, 1e-7);
  }
}

TEST(ReducedFidelity, Examples) {
  EXPECT_NEAR(reduced_fidelity(bell_state(), 2, 2), 1, 1e-12);
  EXPECT_NEAR(reduced_fidelity(basis_state(4, 0), 2, 2), 0.5, 1e-12);
  // sqrt(2F)|psi'> + sqrt(1-2F)|22> with psi' = |0>|1> inside the qubit support of a qutrit Alice
  const double F = 0.3;
  std::vector<cplx> a(9);
  a[0 * 3 + 1] = std::sqrt(2 * F);
  a[2 * 3 + 2] = std::sqrt(1 - 2 * F);
  EXPECT_NEAR(reduced_fidelity(PureState(a), 3, 3), F, 1e-12);
}

TEST(ReducedFidelity, RejectsMixed) {
  EXPECT_THROW(reduced_fidelity(DensityOperator(0.25 * ComplexMatrix::identity(4)), 2, 2),
               std::invalid_argument);
}

TEST(DensityOperator, Validation) {
  EXPECT_THROW(DensityOperator(ComplexMatrix{{1, 0}, {0, 1}}), std::invalid_argument);
  EXPECT_THROW(DensityOperator(ComplexMatrix{{1.5, 0}, {0, -0.5}}), std::invalid_argument);
  EXPECT_THROW(DensityOperator(ComplexMatrix{{0.5, 1}, {0, 0.5}}), std::invalid_argument);
  EXPECT_NO_THROW(DensityOperator(ComplexMatrix{{0.5, 0}, {0, 0.5}}));
}

TEST(PureState, Validation) {
  EXPECT_THROW(PureState({1, 1}), std::invalid_argument);
  const PureState psi = PureState::normalized({1, 1});
  EXPECT_NEAR(std::abs(psi.amplitudes()[0]), 1 / kSqrt2, 1e-15);
}
