#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "magnon/analytic.hpp"
#include "magnon/hamiltonian.hpp"
#include "magnon/observables.hpp"
#include "magnon/propagator.hpp"

using namespace magnon;

namespace {

SingleExcitationState random_state(int N, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  SingleExcitationState s;
  s.f.resize(N);
  for (int j = 0; j < N; ++j) s.f(j) = Complex(g(rng), g(rng));
  s.f /= s.f.norm();
  return s;
}

}  // namespace

TEST_CASE("reduced two-spin density") {
  const int N = 10;

  SECTION("two-site Bell pair") {
    SingleExcitationState s;
    s.f = Eigen::VectorXcd::Zero(N);
    s.f(2) = s.f(7) = 1.0 / std::sqrt(2.0);
    const ReducedTwoSpinDensity rho = reduced_density(s, 2, 7);
    CHECK(rho.p_ud == Catch::Approx(0.5).margin(1e-12));
    CHECK(rho.p_du == Catch::Approx(0.5).margin(1e-12));
    CHECK(rho.p_dd == 0.0);
    CHECK(std::abs(rho.z) == Catch::Approx(0.5).margin(1e-12));
  }

  SECTION("flip sitting on the first site") {
    const SingleExcitationState s = delta_state(N, 3);
    const ReducedTwoSpinDensity rho = reduced_density(s, 3, 5);
    CHECK(rho.p_du == Catch::Approx(1.0).margin(1e-12));
    CHECK(rho.p_ud == 0.0);
    CHECK(std::abs(rho.z) == 0.0);
  }

  SECTION("random state: trace one and positivity") {
    const SingleExcitationState s = random_state(N, 4);
    const ReducedTwoSpinDensity rho = reduced_density(s, 1, 8);
    CHECK(rho.p_uu + rho.p_ud + rho.p_du + rho.p_dd ==
          Catch::Approx(1.0).margin(1e-10));
    CHECK(rho.p_uu >= 0.0);
    CHECK(std::norm(rho.z) <= rho.p_ud * rho.p_du + 1e-12);
  }

  SECTION("coinciding sites are rejected") {
    CHECK_THROWS_AS(reduced_density(delta_state(N, 0), 4, 4), std::invalid_argument);
  }
}

TEST_CASE("concurrence forms agree and disagree where they should") {
  const int N = 12;

  SECTION("Bell pair gives 1 under both forms") {
    SingleExcitationState s;
    s.f = Eigen::VectorXcd::Zero(N);
    s.f(2) = s.f(9) = 1.0 / std::sqrt(2.0);
    CHECK(concurrence(s, 2, 9) == Catch::Approx(1.0).margin(1e-12));
    CHECK(concurrence(s, 2, 9, ConcurrenceForm::Symmetrized) ==
          Catch::Approx(1.0).margin(1e-12));
  }

  SECTION("imaginary coherence separates the forms") {
    SingleExcitationState s;
    s.f = Eigen::VectorXcd::Zero(N);
    s.f(2) = 1.0 / std::sqrt(2.0);
    s.f(9) = Complex(0.0, 1.0 / std::sqrt(2.0));
    CHECK(concurrence(s, 2, 9) == Catch::Approx(1.0).margin(1e-12));
    CHECK(concurrence(s, 2, 9, ConcurrenceForm::Symmetrized) ==
          Catch::Approx(0.0).margin(1e-12));
  }

  SECTION("bounds on a thousand random states") {
    for (unsigned seed = 0; seed < 1000; ++seed) {
      const SingleExcitationState s = random_state(8, seed);
      const double c_std = concurrence(s, 1, 6);
      const double c_sym = concurrence(s, 1, 6, ConcurrenceForm::Symmetrized);
      REQUIRE(c_std >= 0.0);
      REQUIRE(c_std <= 1.0 + 1e-12);
      REQUIRE(c_sym <= c_std + 1e-12);
    }
  }
}

TEST_CASE("mirror-pair concurrence profile") {
  const int N = 100;

  SECTION("flip at the center has no pair entanglement") {
    const auto prof = concurrence_profile(delta_state(N, 50), 50);
    for (double c : prof) CHECK(c == 0.0);
  }

  SECTION("one symmetric pair lights up a single offset") {
    const Topology ring = Topology::ring(N);
    std::vector<Complex> wing(5, Complex(0.0, 0.0));
    wing[4] = 1.0;
    const SingleExcitationState s =
        symmetric_state(ring, 50, Complex(0.0, 0.0), wing, Parity::Even);
    const auto prof = concurrence_profile(s, 50);
    CHECK(prof[4] == Catch::Approx(1.0).margin(1e-12));
    for (int j = 1; j <= N / 2 - 1; ++j)
      if (j != 5) CHECK(prof[j - 1] == Catch::Approx(0.0).margin(1e-12));
  }

  SECTION("profile sums to one for center-free symmetric states") {
    const Topology ring = Topology::ring(N);
    std::mt19937 rng(17);
    std::normal_distribution<double> g;
    std::vector<Complex> wing(N / 4);
    for (auto& c : wing) c = Complex(g(rng), g(rng));
    const SingleExcitationState s =
        symmetric_state(ring, 30, Complex(0.0, 0.0), wing, Parity::Even);
    const auto prof = concurrence_profile(s, 30);
    double total = 0.0;
    for (double c : prof) total += c;
    CHECK(total == Catch::Approx(1.0).margin(1e-6));
  }

  SECTION("with center amplitude the sum drops by its weight") {
    const Topology ring = Topology::ring(N);
    std::vector<Complex> wing{Complex(0.4, 0.0), Complex(0.3, 0.1)};
    const SingleExcitationState s =
        symmetric_state(ring, 30, Complex(0.6, 0.0), wing, Parity::Odd);
    const auto prof = concurrence_profile(s, 30);
    double total = 0.0;
    for (double c : prof) total += c;
    CHECK(total == Catch::Approx(1.0 - std::norm(s.f(30))).margin(1e-10));
  }
}

TEST_CASE("autocorrelation basics") {
  const int N = 50;
  const SingleExcitationState a = random_state(N, 1);
  CHECK(autocorrelation(a, a) == Catch::Approx(1.0).margin(1e-12));
  CHECK(autocorrelation(delta_state(N, 3), delta_state(N, 4)) == 0.0);
  CHECK_THROWS_AS(autocorrelation(a, random_state(N + 2, 2)), std::invalid_argument);
}

TEST_CASE("autocorrelation kernels from both routes agree") {
  const int N = 64;
  const Topology ring = Topology::ring(N);
  const CouplingProfile p = build_couplings(ring, 12);
  const SingleExcitationState d = delta_state(N, 10);
  const AutocorrelationKernel ks = autocorrelation_kernel(
      SpectralDecomposition::compute(build_dense(p, ring)), d);
  const AutocorrelationKernel kc = autocorrelation_kernel(build_symbol(p, ring), d);
  for (double t : {0.0, 0.3, 1.7, 2.0 * kPi})
    CHECK(ks.at(t) == Catch::Approx(kc.at(t)).margin(1e-10));
}

TEST_CASE("scan maximum on the four-site ring hits the phase-realignment instant") {
  // N = 4 full coupling has eigenvalues {1 - c, 1, 1, 1 + c} with c = 8/pi^2,
  // giving |A(t)| = cos^2(c t / 2): unit maxima at t = 2 pi / c = pi^3 / 4.
  const Topology ring = Topology::ring(4);
  const CouplingProfile p = build_couplings(ring, std::nullopt);
  const AutocorrelationKernel kernel =
      autocorrelation_kernel(build_symbol(p, ring), delta_state(4, 0));

  const double c = 8.0 / (kPi * kPi);
  for (double t : {0.4, 1.0, 2.9})
    CHECK(kernel.at(t) ==
          Catch::Approx(std::pow(std::cos(c * t / 2.0), 2)).margin(1e-12));

  const ScanResult scan =
      max_autocorrelation(kernel, kPi / 4.0, 3.0 * kPi, 2.0 * kPi / 40.0);
  CHECK(scan.max_value == Catch::Approx(1.0).margin(1e-6));
  CHECK(scan.argmax == Catch::Approx(kPi * kPi * kPi / 4.0).margin(1e-3));
}

TEST_CASE("scan result is stable under grid halving") {
  const int N = 100;
  const Topology ring = Topology::ring(N);
  const AutocorrelationKernel kernel = autocorrelation_kernel(
      build_symbol(build_couplings(ring, 10), ring), delta_state(N, 50));
  const double dt = 2.0 * kPi / (10.0 * N);
  const ScanResult coarse = max_autocorrelation(kernel, kPi / 4.0, 3.0 * kPi, dt);
  const ScanResult fine = max_autocorrelation(kernel, kPi / 4.0, 3.0 * kPi, dt / 2.0);
  CHECK(std::abs(coarse.max_value - fine.max_value) <= 1e-4);
}

TEST_CASE("scan rejects bad windows") {
  const AutocorrelationKernel kernel{Eigen::VectorXd::Zero(2),
                                     Eigen::VectorXd::Constant(2, 0.5)};
  CHECK_THROWS_AS(max_autocorrelation(kernel, 1.0, 0.5, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(max_autocorrelation(kernel, 0.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("interval weights") {
  const int N = 100;
  const SingleExcitationState r = random_state(N, 12);
  CHECK(packet_weight(r, 0, N) == Catch::Approx(1.0).margin(1e-12));
  CHECK(packet_weight(r, 42, 0) == 0.0);

  SECTION("half-ring around the right mover at quarter period") {
    const int NB = 1000;
    const SingleExcitationState evolved =
        evolve_exact_linear(delta_state(NB, 500), kPi / 2.0);
    // packets sit at 500 +- 250; the right half-ring is (500, 1000)
    CHECK(packet_weight(evolved, 500, NB / 2) == Catch::Approx(0.5).margin(1e-2));
  }

  SECTION("wrapping interval equals the complement's deficit") {
    const double inner = packet_weight(r, 90, 20);  // wraps through 0
    double direct = 0.0;
    for (int j = 90; j < 110; ++j) direct += std::norm(r.f(j % N));
    CHECK(inner == Catch::Approx(direct).margin(1e-14));
  }
}

TEST_CASE("mirror-pair concurrence at the arrival instants") {
  // Exact-linear ring, N = 1000, j = 100: C = 1/2 at t0 = 2 pi j / N and
  // 2/pi^2 at t1 = 2 pi (j+1) / N, both within 2e-2.
  const int N = 1000, site = 500, j = 100;
  const SingleExcitationState d = delta_state(N, site);

  const SingleExcitationState at_t0 = evolve_exact_linear(d, 2.0 * kPi * j / N);
  for (auto form : {ConcurrenceForm::Standard, ConcurrenceForm::Symmetrized})
    CHECK(concurrence(at_t0, site + j, site - j, form) ==
          Catch::Approx(0.5).margin(2e-2));

  const SingleExcitationState at_t1 =
      evolve_exact_linear(d, 2.0 * kPi * (j + 1) / N);
  const auto prof = concurrence_profile(at_t1, site);
  CHECK(prof[j - 1] == Catch::Approx(2.0 / (kPi * kPi)).margin(2e-2));
}

TEST_CASE("magnitude observables are blind to the hopping sign") {
  const int N = 200;
  const Topology ring = Topology::ring(N);
  const CirculantSymbol neg =
      build_symbol(build_couplings(ring, std::nullopt, HoppingSign::Negative), ring);
  const CirculantSymbol pos =
      build_symbol(build_couplings(ring, std::nullopt, HoppingSign::Positive), ring);
  const SingleExcitationState d = delta_state(N, 60);

  for (double t : {0.4, kPi / 2.0, 2.0 * kPi}) {
    const SingleExcitationState a = evolve_ring_fft(neg, d, t);
    const SingleExcitationState b = evolve_ring_fft(pos, d, t);
    for (int jj = 0; jj < N; ++jj)
      CHECK(std::abs(a.f(jj)) == Catch::Approx(std::abs(b.f(jj))).margin(1e-12));
    CHECK(autocorrelation(d, a) == Catch::Approx(autocorrelation(d, b)).margin(1e-12));
    CHECK(concurrence(a, 90, 30) == Catch::Approx(concurrence(b, 90, 30)).margin(1e-12));
    // mirror pairs are an even separation apart: the symmetrized form matches too
    CHECK(concurrence(a, 90, 30, ConcurrenceForm::Symmetrized) ==
          Catch::Approx(concurrence(b, 90, 30, ConcurrenceForm::Symmetrized))
              .margin(1e-12));
  }

  SECTION("autocorrelation is invariant under a global staggered phase") {
    SingleExcitationState sa = random_state(N, 5), sb = random_state(N, 6);
    const double before = autocorrelation(sa, sb);
    for (int jj = 0; jj < N; ++jj) {
      const double sign = jj % 2 == 0 ? 1.0 : -1.0;
      sa.f(jj) *= sign;
      sb.f(jj) *= sign;
    }
    CHECK(autocorrelation(sa, sb) == Catch::Approx(before).margin(1e-12));
  }
}
