#pragma once

// Closed-form continuum-limit description of the two counter-propagating
// packets created from a single flip, their projection amplitudes, and the
// recurrence schedule, plus the standard initial states (Gaussian and
// reflection-symmetric superpositions).
//
// A flip at site N_A evolves into phi_plus + phi_minus.  In terms of the
// moving offset l = N_A - j +- [N t / 2pi] the per-site amplitude of each
// branch approaches
//
//     1/2          l = 0        (the packet center)
//     -+ i/(pi l)  l odd
//     0            l even, nonzero
//
// for large N.  The finite-N amplitude of a branch at odd l is
// (1/N)/|sin(pi l / N)|, which the continuum value matches to O((l/N)^2).
// The closed forms are only defined at discrete instants, i.e. when
// N t / 2pi is an integer.

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "magnon/propagator.hpp"
#include "magnon/state.hpp"

namespace magnon {

// Reassembly event of the two packets: at time (m+ + m-) pi the state is a
// single flip again, displaced by N (m+ - m-) / 2 sites.
struct RecurrenceEvent {
  int m_plus = 0;
  int m_minus = 0;
  double time = 0.0;
  int position = 0;
};

inline Complex packet_projection(Branch branch, long long l) {
  if (l == 0) return Complex(0.5, 0.0);
  if (l % 2 == 0) return Complex(0.0, 0.0);
  const double mag = 1.0 / (kPi * double(l));
  return branch == Branch::Plus ? Complex(0.0, -mag) : Complex(0.0, mag);
}

namespace detail {

// Nearest integer to N t / 2pi, rejecting instants that are not discrete.
inline long long discrete_steps(int N, double t) {
  const double s = N * t / (2.0 * kPi);
  const double r = std::round(s);
  if (std::abs(s - r) > 1e-9 * std::max(1.0, std::abs(s)))
    throw std::invalid_argument(
        "packet_state: N t / 2pi must be an integer (discrete instant)");
  return static_cast<long long>(r);
}

// Wraps an offset into (-N/2, N/2].
inline long long wrap_offset(long long l, int N) {
  l %= N;
  if (l <= -N / 2) l += N;
  if (l > N / 2) l -= N;
  return l;
}

}  // namespace detail

// Per-site amplitudes of one branch at a discrete instant (unnormalized; each
// branch carries total probability -> 1/2 as N grows).
inline Eigen::VectorXcd packet_state(int N, int site, double t, Branch branch) {
  if (site < 0 || site >= N)
    throw std::invalid_argument("packet_state: site out of range");
  const long long steps = detail::discrete_steps(N, t);
  const long long shift = branch == Branch::Plus ? steps : -steps;
  Eigen::VectorXcd amps(N);
  for (int j = 0; j < N; ++j) {
    const long long l = detail::wrap_offset(site - j + shift, N);
    amps(j) = packet_projection(branch, l);
  }
  return amps;
}

// All recurrence events with time <= max_order * pi, ordered by time.
inline std::vector<RecurrenceEvent> recurrence_schedule(int N, int site,
                                                        int max_order) {
  if (site < 0 || site >= N)
    throw std::invalid_argument("recurrence_schedule: site out of range");
  if (max_order < 0)
    throw std::invalid_argument("recurrence_schedule: negative order");
  std::vector<RecurrenceEvent> events;
  for (int total = 0; total <= max_order; ++total) {
    for (int mp = 0; mp <= total; ++mp) {
      const int mm = total - mp;
      long long pos = site - static_cast<long long>(N) * (mp - mm) / 2;
      pos %= N;
      if (pos < 0) pos += N;
      events.push_back({mp, mm, total * kPi, static_cast<int>(pos)});
    }
  }
  return events;
}

// Normalized Gaussian packet f_i ~ exp(-(alpha^2/2) d^2) about `center`,
// where d is the wrapped distance on a ring and |center - i| on a chain.
// alpha = 0 degenerates to the uniform state.
inline SingleExcitationState gaussian_state(const Topology& topology, int center,
                                            double alpha) {
  const int N = topology.sites;
  if (center < 0 || center >= N)
    throw std::invalid_argument("gaussian_state: center out of range");
  if (alpha < 0.0) throw std::invalid_argument("gaussian_state: alpha < 0");
  SingleExcitationState s;
  s.f.resize(N);
  for (int i = 0; i < N; ++i) {
    double d = std::abs(double(center - i));
    if (topology.is_ring()) d = std::min(d, N - d);
    s.f(i) = std::exp(-0.5 * alpha * alpha * d * d);
  }
  s.f /= s.f.norm();
  return s;
}

enum class Parity { Even, Odd };

// Reflection-symmetric superposition about `center`:
//   f_center = f0,  f_{center+j} = wing[j-1],  f_{center-j} = parity * wing[j-1]
// for j = 1..N/2, normalized.  On a ring the j = N/2 contributions land on the
// same site and accumulate.
inline SingleExcitationState symmetric_state(const Topology& topology, int center,
                                             Complex f0,
                                             std::span<const Complex> wing,
                                             Parity parity) {
  const int N = topology.sites;
  if (center < 0 || center >= N)
    throw std::invalid_argument("symmetric_state: center out of range");
  if (static_cast<int>(wing.size()) > N / 2)
    throw std::invalid_argument("symmetric_state: wing longer than N/2");
  const double p = parity == Parity::Even ? 1.0 : -1.0;
  SingleExcitationState s;
  s.f = Eigen::VectorXcd::Zero(N);
  s.f(center) = f0;
  for (int j = 1; j <= static_cast<int>(wing.size()); ++j) {
    const Complex c = wing[j - 1];
    if (c == Complex(0.0, 0.0)) continue;
    if (topology.is_ring()) {
      s.f(((center + j) % N + N) % N) += c;
      s.f(((center - j) % N + N) % N) += p * c;
    } else {
      if (center + j >= N || center - j < 0)
        throw std::invalid_argument("symmetric_state: wing leaves the chain");
      s.f(center + j) += c;
      s.f(center - j) += p * c;
    }
  }
  const double nrm = s.f.norm();
  if (nrm < 1e-300)
    throw std::invalid_argument("symmetric_state: zero state");
  s.f /= nrm;
  return s;
}

}  // namespace magnon
