#pragma once

// Exact time evolution by two independent routes:
//
//   evolve_spectral   f(t) = V exp(-i Lambda t) V^T f(0)   (dense, any topology)
//   evolve_ring_fft   D_n(t) = exp(-i eps_n t) D_n(0)      (rings, O(N log N))
//
// plus an idealized propagator that applies the linear dispersion
// eps_n = |n| directly, bypassing coupling synthesis.  The two routes are
// cross-validated in the test suite; the idealized one isolates truncation
// error from the packet dynamics.

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "magnon/hamiltonian.hpp"
#include "magnon/state.hpp"

namespace magnon {

struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;  // orthonormal columns

  int size() const { return static_cast<int>(eigenvalues.size()); }

  static SpectralDecomposition compute(const Eigen::MatrixXd& H) {
    if (H.rows() != H.cols())
      throw std::invalid_argument("SpectralDecomposition: matrix not square");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("SpectralDecomposition: eigensolver failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
  }
};

inline SingleExcitationState evolve_spectral(const SpectralDecomposition& decomp,
                                             const SingleExcitationState& state,
                                             double t) {
  if (decomp.size() != state.sites())
    throw std::invalid_argument("evolve_spectral: dimension mismatch");
  Eigen::VectorXcd c = decomp.eigenvectors.transpose() * state.f;
  c.array() *= (Complex(0.0, -t) * decomp.eigenvalues.array().cast<Complex>()).exp();
  SingleExcitationState out;
  out.f = decomp.eigenvectors * c;
  return out;
}

inline SingleExcitationState evolve_ring_fft(const CirculantSymbol& symbol,
                                             const SingleExcitationState& state,
                                             double t) {
  if (symbol.sites() != state.sites())
    throw std::invalid_argument("evolve_ring_fft: dimension mismatch");
  MomentumState m = to_momentum(state);
  m.d.array() *= (Complex(0.0, -t) * symbol.values.array().cast<Complex>()).exp();
  return from_momentum(m);
}

// Idealized linear dispersion: eps_n = (N/2pi)|k_n| = |n| exactly.
inline SingleExcitationState evolve_exact_linear(const SingleExcitationState& state,
                                                 double t) {
  const int N = state.sites();
  MomentumState m = to_momentum(state);
  for (int slot = 0; slot < N; ++slot) {
    const double eps = std::abs(momentum_index(slot, N));
    m.d(slot) *= std::exp(Complex(0.0, -eps * t));
  }
  return from_momentum(m);
}

// The two counter-propagating packet families.  Plus moves with velocity
// +N/2pi, Minus with -N/2pi (in the negative-hopping gauge).
enum class Branch { Plus, Minus };

// Momentum-half component of a state: Plus keeps indices n in [0, N/2-1],
// Minus keeps n in [-N/2, -1].  The two halves partition the momentum grid,
// so plus + minus reconstructs the state exactly and the branches are
// mutually orthogonal.
inline SingleExcitationState momentum_half(const SingleExcitationState& state,
                                           Branch branch) {
  const int N = state.sites();
  MomentumState m = to_momentum(state);
  for (int slot = 0; slot < N; ++slot) {
    const int n = momentum_index(slot, N);
    const bool keep = branch == Branch::Plus ? n >= 0 : n < 0;
    if (!keep) m.d(slot) = 0.0;
  }
  return from_momentum(m);
}

}  // namespace magnon
