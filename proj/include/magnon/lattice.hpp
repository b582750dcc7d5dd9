#pragma once

// Coupling synthesis for the linear-magnon ring.
//
// The triangular-wave Fourier series
//
//   |2x| = N/2 - sum_{r odd} (4N / (r^2 pi^2)) cos(r pi (2x) / N),   |2x| <= N,
//
// evaluated at 2x = N k / pi turns into a hopping expansion of the target
// dispersion eps(k) = (N/2pi)|k|.  Matching coefficients gives a uniform
// diagonal J0 = N/4 and hoppings of magnitude N/(r^2 pi^2) on odd ranges r
// only; even ranges carry no coupling.  The sign of the hoppings is a gauge
// choice: negative hoppings realize (N/2pi)|k| literally, positive hoppings
// give the mirror dispersion eps(pi - |k|), related by the staggered phase
// f_j -> (-1)^j f_j.  Both are exposed; all magnitude observables agree.

#include <cmath>
#include <cstdlib>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace magnon {

inline constexpr double kPi = 3.14159265358979323846;

enum class TopologyKind { Ring, OpenChain };

struct Topology {
  TopologyKind kind = TopologyKind::Ring;
  int sites = 0;

  Topology(TopologyKind k, int n) : kind(k), sites(n) {
    if (n < 4 || n % 2 != 0)
      throw std::invalid_argument("Topology: sites must be even and >= 4, got " +
                                  std::to_string(n));
  }
  static Topology ring(int n) { return Topology(TopologyKind::Ring, n); }
  static Topology chain(int n) { return Topology(TopologyKind::OpenChain, n); }

  bool is_ring() const { return kind == TopologyKind::Ring; }

  // Largest retainable coupling range: N/2 on a ring (longest distinct
  // distance), N-1 on an open chain.
  int max_truncation() const { return is_ring() ? sites / 2 : sites - 1; }
};

// Negative hoppings produce eps(k) = (N/2pi)|k|; positive hoppings its
// staggered-gauge mirror.  Default everywhere is Negative.
enum class HoppingSign { Negative, Positive };

inline double sign_factor(HoppingSign s) {
  return s == HoppingSign::Negative ? -1.0 : 1.0;
}

inline std::string to_string(HoppingSign s) {
  return s == HoppingSign::Negative ? "negative" : "positive";
}

inline HoppingSign hopping_sign_from_string(const std::string& s) {
  if (s == "negative") return HoppingSign::Negative;
  if (s == "positive") return HoppingSign::Positive;
  throw std::invalid_argument("unknown hopping sign '" + s + "'");
}

// Synthesized couplings: uniform diagonal J0 plus hoppings t_r on odd ranges
// r < truncation.  Immutable after construction.
struct CouplingProfile {
  int sites = 0;
  int truncation = 0;  // ranges r < truncation are kept
  HoppingSign sign = HoppingSign::Negative;
  double diagonal = 0.0;                        // J0 = N/4
  std::vector<std::pair<int, double>> hoppings; // (r, t_r), odd r ascending

  double hopping(int r) const {
    for (const auto& [rr, t] : hoppings)
      if (rr == r) return t;
    return 0.0;
  }
};

// Builds the coupling profile for the requested topology.  r0 = nullopt means
// "full": every distinct odd range the topology supports.
inline CouplingProfile build_couplings(const Topology& topology,
                                       std::optional<int> r0,
                                       HoppingSign sign = HoppingSign::Negative) {
  const int n = topology.sites;
  int trunc = r0.value_or(topology.max_truncation());
  if (r0.has_value() && (*r0 < 1 || *r0 > topology.max_truncation()))
    throw std::invalid_argument(
        "truncation must lie in [1, " + std::to_string(topology.max_truncation()) +
        "], got " + std::to_string(*r0));

  CouplingProfile p;
  p.sites = n;
  p.truncation = trunc;
  p.sign = sign;
  p.diagonal = n / 4.0;
  const double s = sign_factor(sign);
  for (int r = 1; r < trunc; r += 2)
    p.hoppings.emplace_back(r, s * n / (double(r) * r * kPi * kPi));
  return p;
}

// Single-magnon energy at momentum index n (k = 2 pi n / N):
//   eps_n = J0 + sum_{odd r < r0} 2 t_r cos(k r).
// Defined for rings only; an open chain has no momentum quantum number.
inline double dispersion(const CouplingProfile& profile, const Topology& topology,
                         int n) {
  if (!topology.is_ring())
    throw std::invalid_argument("dispersion: defined only on ring topology");
  if (profile.sites != topology.sites)
    throw std::invalid_argument("dispersion: profile/topology size mismatch");
  const int N = profile.sites;
  if (n < -N / 2 || n > N / 2 - 1)
    throw std::invalid_argument("dispersion: momentum index out of range");
  const double k = 2.0 * kPi * n / N;
  double eps = profile.diagonal;
  for (const auto& [r, t] : profile.hoppings)
    eps += 2.0 * t * std::cos(k * r);
  return eps;
}

// Max-norm residual of the truncated triangular-wave series over the given
// sample points xi (requires |2 xi| <= N).  The residual decays like
// O(1/r_max) in max norm; away from the kink at xi = 0 it decays like
// O(1/r_max^2) pointwise.
inline double verify_fourier_identity(int N, int r_max,
                                      std::span<const double> samples) {
  if (N < 2) throw std::invalid_argument("verify_fourier_identity: N too small");
  if (r_max < 1) throw std::invalid_argument("verify_fourier_identity: r_max < 1");
  double worst = 0.0;
  for (double xi : samples) {
    if (std::abs(2.0 * xi) > N + 1e-12)
      throw std::invalid_argument("verify_fourier_identity: |2 xi| exceeds N");
    double partial = N / 2.0;
    for (int r = 1; r <= r_max; r += 2)
      partial -= 4.0 * N / (double(r) * r * kPi * kPi) *
                 std::cos(r * kPi * (2.0 * xi) / N);
    worst = std::max(worst, std::abs(std::abs(2.0 * xi) - partial));
  }
  return worst;
}

inline void to_json(nlohmann::json& j, const CouplingProfile& p) {
  nlohmann::json hops = nlohmann::json::array();
  for (const auto& [r, t] : p.hoppings) hops.push_back({r, t});
  j = nlohmann::json{{"sites", p.sites},
                     {"truncation", p.truncation},
                     {"sign", to_string(p.sign)},
                     {"diagonal", p.diagonal},
                     {"hoppings", std::move(hops)}};
}

}  // namespace magnon
