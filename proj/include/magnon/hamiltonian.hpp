#pragma once

// Single-excitation Hamiltonian in two representations: a dense real
// symmetric matrix (any topology) and the circulant eigenvalue list (rings).
// On a ring the matrix is circulant, so its spectrum is exactly the
// dispersion evaluated on the momentum grid.

#include <ostream>
#include <stdexcept>

#include <Eigen/Dense>

#include "magnon/lattice.hpp"
#include "magnon/state.hpp"

namespace magnon {

inline Eigen::MatrixXd build_dense(const CouplingProfile& profile,
                                   const Topology& topology) {
  if (profile.sites != topology.sites)
    throw std::invalid_argument("build_dense: profile/topology size mismatch");
  const int N = profile.sites;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(N, N);
  H.diagonal().setConstant(profile.diagonal);
  for (const auto& [r, t] : profile.hoppings) {
    if (topology.is_ring()) {
      for (int i = 0; i < N; ++i) {
        H(i, (i + r) % N) += t;
        H((i + r) % N, i) += t;
      }
    } else {
      for (int i = 0; i + r < N; ++i) {
        H(i, i + r) += t;
        H(i + r, i) += t;
      }
    }
  }
  // Ring ranges stay below N/2, so the two wrap directions never collide and
  // each unordered pair is written exactly once per triangle.
  return H;
}

// Circulant eigenvalues eps_n, stored in DFT layout (see state.hpp).
struct CirculantSymbol {
  Eigen::VectorXd values;

  int sites() const { return static_cast<int>(values.size()); }

  double at_index(int n) const {
    const int N = sites();
    if (n < -N / 2 || n > N / 2 - 1)
      throw std::invalid_argument("CirculantSymbol: index out of range");
    return values(dft_slot(n, N));
  }
};

inline CirculantSymbol build_symbol(const CouplingProfile& profile,
                                    const Topology& topology) {
  if (!topology.is_ring())
    throw std::invalid_argument("build_symbol: open chain has no circulant form");
  const int N = profile.sites;
  CirculantSymbol sym;
  sym.values.resize(N);
  for (int m = 0; m < N; ++m)
    sym.values(m) = dispersion(profile, topology, momentum_index(m, N));
  return sym;
}

// Row-per-line CSV dump for external verification; not a hot path.
inline void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& H) {
  for (Eigen::Index i = 0; i < H.rows(); ++i) {
    for (Eigen::Index j = 0; j < H.cols(); ++j) {
      if (j) os << ',';
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.12g", H(i, j));
      os << buf;
    }
    os << '\n';
  }
}

}  // namespace magnon
