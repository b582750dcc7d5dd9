#pragma once

// Single-excitation states and the site <-> momentum transform.
//
// A state is a normalized complex amplitude vector f_j over the N sites.
// Momentum amplitudes follow the unitary convention
//   D_n = (1/sqrt N) sum_j exp(-i k_n j) f_j,   k_n = 2 pi n / N,
// with momentum indices n in [-N/2, N/2-1].  Internally momentum vectors are
// stored in DFT layout m = 0..N-1 (n = m for m < N/2, n = m - N otherwise);
// the phases involved are identical because exp(-i k j) is N-periodic in n.

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "magnon/lattice.hpp"

namespace magnon {

using Complex = std::complex<double>;

// Maps DFT slot m in [0, N) to the signed momentum index n in [-N/2, N/2-1].
inline int momentum_index(int m, int N) { return m < N / 2 ? m : m - N; }

// Inverse of momentum_index.
inline int dft_slot(int n, int N) { return n >= 0 ? n : n + N; }

struct SingleExcitationState {
  Eigen::VectorXcd f;

  int sites() const { return static_cast<int>(f.size()); }
  double norm() const { return f.norm(); }
};

struct MomentumState {
  Eigen::VectorXcd d;  // DFT layout

  int sites() const { return static_cast<int>(d.size()); }
  double norm() const { return d.norm(); }

  // Amplitude at signed momentum index n in [-N/2, N/2-1].
  Complex at_index(int n) const {
    const int N = sites();
    if (n < -N / 2 || n > N / 2 - 1)
      throw std::invalid_argument("MomentumState: index out of range");
    return d(dft_slot(n, N));
  }
};

namespace detail {

// One cached transform per thread; kissfft keeps per-size plans internally.
inline Eigen::FFT<double>& fft_engine() {
  thread_local Eigen::FFT<double> fft;
  return fft;
}

}  // namespace detail

inline SingleExcitationState delta_state(int N, int site) {
  if (site < 0 || site >= N)
    throw std::invalid_argument("delta_state: site " + std::to_string(site) +
                                " out of range for N = " + std::to_string(N));
  SingleExcitationState s;
  s.f = Eigen::VectorXcd::Zero(N);
  s.f(site) = 1.0;
  return s;
}

inline MomentumState to_momentum(const SingleExcitationState& state) {
  const int N = state.sites();
  MomentumState m;
  detail::fft_engine().fwd(m.d, state.f);
  m.d /= std::sqrt(double(N));
  return m;
}

inline SingleExcitationState from_momentum(const MomentumState& mstate) {
  const int N = mstate.sites();
  SingleExcitationState s;
  detail::fft_engine().inv(s.f, mstate.d);  // inv carries the 1/N factor
  s.f *= std::sqrt(double(N));
  return s;
}

// Cyclic shift by `offset` sites: result_j = f_{j - offset mod N}.
inline SingleExcitationState rotated(const SingleExcitationState& state, int offset) {
  const int N = state.sites();
  SingleExcitationState out;
  out.f.resize(N);
  for (int j = 0; j < N; ++j) {
    int src = (j - offset) % N;
    if (src < 0) src += N;
    out.f(j) = state.f(src);
  }
  return out;
}

}  // namespace magnon
