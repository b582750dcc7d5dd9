#pragma once

// Entanglement and transfer diagnostics over single-excitation states:
// two-spin reduced density matrix, concurrence (coherence form and the
// symmetrized-expectation form), mirror-pair concurrence profiles,
// autocorrelation scans, and interval occupation weights.

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "magnon/propagator.hpp"
#include "magnon/state.hpp"

namespace magnon {

// Reduced state of spins (i, j): diagonal populations plus the coherence z
// between the up-down and down-up levels.  For a pure single-excitation
// state p_dd = 0 and z = f_i conj(f_j).
struct ReducedTwoSpinDensity {
  double p_uu = 0.0;
  double p_ud = 0.0;
  double p_du = 0.0;
  double p_dd = 0.0;
  Complex z{0.0, 0.0};
};

inline ReducedTwoSpinDensity reduced_density(const SingleExcitationState& state,
                                             int i, int j) {
  const int N = state.sites();
  if (i < 0 || i >= N || j < 0 || j >= N)
    throw std::invalid_argument("reduced_density: site out of range");
  if (i == j) throw std::invalid_argument("reduced_density: sites must differ");
  ReducedTwoSpinDensity rho;
  rho.p_du = std::norm(state.f(i));
  rho.p_ud = std::norm(state.f(j));
  rho.p_dd = 0.0;
  rho.p_uu = std::max(0.0, 1.0 - rho.p_du - rho.p_ud);
  rho.z = state.f(i) * std::conj(state.f(j));
  return rho;
}

enum class ConcurrenceForm { Standard, Symmetrized };

// Standard: C = max(0, 2(|z| - sqrt(p_uu p_dd))) = 2 |f_i f_j| here, since
// the doubly-flipped population vanishes.  Symmetrized: C = |2 Re z|, the
// magnitude of the symmetrized exchange expectation.  The two coincide
// whenever f_i conj(f_j) is real, which reflection-symmetric states satisfy.
inline double concurrence(const SingleExcitationState& state, int i, int j,
                          ConcurrenceForm form = ConcurrenceForm::Standard) {
  const ReducedTwoSpinDensity rho = reduced_density(state, i, j);
  if (form == ConcurrenceForm::Standard)
    return std::max(0.0, 2.0 * (std::abs(rho.z) -
                                std::sqrt(rho.p_uu * rho.p_dd)));
  return std::abs(2.0 * rho.z.real());
}

// C(j) between the mirror sites center +- j for j = 1 .. N/2-1 (wrapped on a
// ring).  For a reflection-symmetric state with empty center and antipode the
// values sum to 1 by normalization.
inline std::vector<double> concurrence_profile(
    const SingleExcitationState& state, int center,
    ConcurrenceForm form = ConcurrenceForm::Standard) {
  const int N = state.sites();
  if (center < 0 || center >= N)
    throw std::invalid_argument("concurrence_profile: center out of range");
  std::vector<double> prof;
  prof.reserve(N / 2 - 1);
  for (int j = 1; j <= N / 2 - 1; ++j) {
    const int a = ((center + j) % N + N) % N;
    const int b = ((center - j) % N + N) % N;
    prof.push_back(concurrence(state, a, b, form));
  }
  return prof;
}

inline double autocorrelation(const SingleExcitationState& reference,
                              const SingleExcitationState& current) {
  if (reference.sites() != current.sites())
    throw std::invalid_argument("autocorrelation: dimension mismatch");
  return std::abs(reference.f.dot(current.f));
}

// |A(t)| for a fixed initial state collapses to |sum_m w_m exp(-i eps_m t)|
// with constant weights, so scans cost O(modes) per instant.
struct AutocorrelationKernel {
  Eigen::VectorXd frequencies;
  Eigen::VectorXd weights;

  double at(double t) const {
    Complex acc(0.0, 0.0);
    const int n = static_cast<int>(frequencies.size());
    for (int m = 0; m < n; ++m)
      acc += weights(m) * std::exp(Complex(0.0, -frequencies(m) * t));
    return std::abs(acc);
  }
};

inline AutocorrelationKernel autocorrelation_kernel(
    const SpectralDecomposition& decomp, const SingleExcitationState& initial) {
  if (decomp.size() != initial.sites())
    throw std::invalid_argument("autocorrelation_kernel: dimension mismatch");
  Eigen::VectorXcd c = decomp.eigenvectors.transpose() * initial.f;
  return {decomp.eigenvalues, c.cwiseAbs2()};
}

inline AutocorrelationKernel autocorrelation_kernel(
    const CirculantSymbol& symbol, const SingleExcitationState& initial) {
  if (symbol.sites() != initial.sites())
    throw std::invalid_argument("autocorrelation_kernel: dimension mismatch");
  MomentumState m = to_momentum(initial);
  return {symbol.values, m.d.cwiseAbs2()};
}

struct ScanResult {
  double max_value = 0.0;
  double argmax = 0.0;
};

// Grid max over [t_lo, t_hi] followed by bisection refinement around the best
// grid point, so the result is stable to ~1e-4 under grid halving.
inline ScanResult max_autocorrelation(const AutocorrelationKernel& kernel,
                                      double t_lo, double t_hi, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("max_autocorrelation: dt <= 0");
  if (t_hi < t_lo) throw std::invalid_argument("max_autocorrelation: empty window");
  const long long steps = static_cast<long long>(std::ceil((t_hi - t_lo) / dt));
  ScanResult best{-1.0, t_lo};
  for (long long i = 0; i <= steps; ++i) {
    const double t = std::min(t_lo + i * dt, t_hi);
    const double a = kernel.at(t);
    if (a > best.max_value) best = {a, t};
  }
  double lo = std::max(t_lo, best.argmax - dt);
  double hi = std::min(t_hi, best.argmax + dt);
  for (int iter = 0; iter < 48 && hi - lo > 1e-13; ++iter) {
    const double t1 = lo + (hi - lo) / 3.0;
    const double t2 = hi - (hi - lo) / 3.0;
    const double a1 = kernel.at(t1);
    const double a2 = kernel.at(t2);
    if (a1 > best.max_value) best = {a1, t1};
    if (a2 > best.max_value) best = {a2, t2};
    if (a1 < a2)
      lo = t1;
    else
      hi = t2;
  }
  return best;
}

// Occupation of `count` consecutive sites starting at `first`, wrapping
// cyclically; count = 0 gives 0, count = N the full norm.
inline double packet_weight(const SingleExcitationState& state, int first,
                            int count) {
  const int N = state.sites();
  if (first < 0 || first >= N || count < 0 || count > N)
    throw std::invalid_argument("packet_weight: interval out of range");
  double w = 0.0;
  for (int i = 0; i < count; ++i) w += std::norm(state.f((first + i) % N));
  return w;
}

}  // namespace magnon
