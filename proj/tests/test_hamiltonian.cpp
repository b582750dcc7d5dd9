#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "magnon/hamiltonian.hpp"
#include "magnon/lattice.hpp"

using namespace magnon;

TEST_CASE("N=4 ring matrix by hand") {
  const Topology ring = Topology::ring(4);
  const CouplingProfile p = build_couplings(ring, std::nullopt);
  const Eigen::MatrixXd H = build_dense(p, ring);
  const double t1 = -4.0 / (kPi * kPi);
  for (int i = 0; i < 4; ++i) {
    CHECK(H(i, i) == 1.0);
    CHECK(H(i, (i + 1) % 4) == Catch::Approx(t1).epsilon(1e-15));
    CHECK(H(i, (i + 3) % 4) == Catch::Approx(t1).epsilon(1e-15));
    CHECK(H(i, (i + 2) % 4) == 0.0);  // distance 2 is even
  }
}

TEST_CASE("open chain truncation boundary") {
  const Topology chain = Topology::chain(6);
  const CouplingProfile p = build_couplings(chain, 4);
  const Eigen::MatrixXd H = build_dense(p, chain);
  CHECK(H(0, 3) == Catch::Approx(p.hopping(3)).epsilon(1e-15));
  CHECK(H(0, 5) == 0.0);  // r = 5 >= r0
  CHECK(H(0, 1) == Catch::Approx(p.hopping(1)).epsilon(1e-15));
  CHECK(H(0, 2) == 0.0);
  // no wrap-around
  CHECK(H(5, 0) == 0.0);
}

TEST_CASE("dense matrix is symmetric with circulant rows and equal row sums") {
  const int N = 30;
  const Topology ring = Topology::ring(N);
  const Eigen::MatrixXd H = build_dense(build_couplings(ring, std::nullopt), ring);

  CHECK((H - H.transpose()).cwiseAbs().maxCoeff() == 0.0);

  const double row0 = H.row(0).sum();
  for (int i = 1; i < N; ++i) {
    CHECK(H.row(i).sum() == Catch::Approx(row0).margin(1e-12));
    for (int j = 0; j < N; ++j)
      CHECK(H(i, j) == H(i - 1, (j - 1 + N) % N));  // row i = row i-1 rotated
  }
}

TEST_CASE("build_dense dimension mismatch") {
  const Topology ring = Topology::ring(10);
  const CouplingProfile p = build_couplings(Topology::ring(12), std::nullopt);
  CHECK_THROWS_AS(build_dense(p, ring), std::invalid_argument);
}

TEST_CASE("symbol on the smallest ring is the closed form") {
  const Topology ring = Topology::ring(4);
  const CouplingProfile p = build_couplings(ring, std::nullopt);
  const CirculantSymbol sym = build_symbol(p, ring);
  for (int n = -2; n < 2; ++n) {
    const double expected = 1.0 - 8.0 / (kPi * kPi) * std::cos(2.0 * kPi * n / 4.0);
    CHECK(sym.at_index(n) == Catch::Approx(expected).margin(1e-14));
  }
}

TEST_CASE("symbol is even in momentum and matches dispersion exactly") {
  const int N = 100;
  const Topology ring = Topology::ring(N);
  const CouplingProfile p = build_couplings(ring, 30);
  const CirculantSymbol sym = build_symbol(p, ring);
  for (int n = 1; n < N / 2; ++n) CHECK(sym.at_index(n) == sym.at_index(-n));
  for (int n = -N / 2; n < N / 2; ++n)
    CHECK(sym.at_index(n) == dispersion(p, ring, n));
}

TEST_CASE("build_symbol rejects chains") {
  const Topology chain = Topology::chain(10);
  CHECK_THROWS_AS(build_symbol(build_couplings(chain, std::nullopt), chain),
                  std::invalid_argument);
}

TEST_CASE("dense spectrum equals the circulant values as a multiset") {
  const int N = 100;
  const Topology ring = Topology::ring(N);
  const CouplingProfile p = build_couplings(ring, std::nullopt);
  const Eigen::MatrixXd H = build_dense(p, ring);
  const CirculantSymbol sym = build_symbol(p, ring);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H);
  std::vector<double> dense(solver.eigenvalues().data(),
                            solver.eigenvalues().data() + N);
  std::vector<double> circ(sym.values.data(), sym.values.data() + N);
  std::sort(dense.begin(), dense.end());
  std::sort(circ.begin(), circ.end());
  double worst = 0.0;
  for (int i = 0; i < N; ++i) worst = std::max(worst, std::abs(dense[i] - circ[i]));
  CHECK(worst <= 1e-9 * N);
}

TEST_CASE("interior momenta are doubly degenerate") {
  const int N = 60;
  const Topology ring = Topology::ring(N);
  const CirculantSymbol sym = build_symbol(build_couplings(ring, std::nullopt), ring);
  for (int n = 1; n < N / 2; ++n) {
    int matches = 0;
    for (int m = -N / 2; m < N / 2; ++m)
      if (std::abs(sym.at_index(m) - sym.at_index(n)) < 1e-12) ++matches;
    CHECK(matches >= 2);
  }
}

TEST_CASE("large-ring symbol obeys the independent tail bound") {
  const int N = 500;
  const Topology ring = Topology::ring(N);
  const CirculantSymbol sym = build_symbol(build_couplings(ring, std::nullopt), ring);

  double tail = 0.0;  // sum over odd r >= 251 of 1/r^2, plus integral remainder
  long long last = 251;
  for (long long r = 251; r <= 4'000'001; r += 2) {
    tail += 1.0 / (double(r) * r);
    last = r;
  }
  tail += 1.0 / (2.0 * (last + 1));
  const double bound = 4.0 * N / (kPi * kPi) * tail;

  double worst = 0.0;
  for (int n = -N / 2; n < N / 2; ++n)
    worst = std::max(worst, std::abs(sym.at_index(n) - std::abs(double(n))));
  CHECK(worst <= bound);
  CHECK(worst >= 0.1);  // the bound is doing real work at this size
}

TEST_CASE("eigensolver residuals meet the accuracy contract") {
  const int N = 100;
  const Topology ring = Topology::ring(N);
  const Eigen::MatrixXd H = build_dense(build_couplings(ring, std::nullopt), ring);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H);
  const double scale = H.norm();
  for (int m = 0; m < N; ++m) {
    const double resid =
        (H * solver.eigenvectors().col(m) -
         solver.eigenvalues()(m) * solver.eigenvectors().col(m)).norm();
    CHECK(resid <= 1e-8 * scale);
  }
}

TEST_CASE("matrix CSV dump is parseable and complete") {
  const Topology ring = Topology::ring(4);
  const Eigen::MatrixXd H = build_dense(build_couplings(ring, std::nullopt), ring);
  std::ostringstream os;
  write_matrix_csv(os, H);
  std::istringstream is(os.str());
  std::string line;
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 3);
  }
  CHECK(rows == 4);
}
