#pragma once

// Scripted, reproducible runs that regenerate the reference dynamics plots
// and their quantitative claims.  Each run returns an in-memory result (data
// table + pass/fail checks) that write_artifacts() lays out as
//   <outdir>/<experiment>/<params-hash>/{data.csv, manifest.json}
// with the coupling profile embedded in the manifest.  Runs are pure
// functions of their parameters; reruns produce byte-identical CSV.

#include <atomic>
#include <cmath>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "magnon/analytic.hpp"
#include "magnon/hamiltonian.hpp"
#include "magnon/io.hpp"
#include "magnon/lattice.hpp"
#include "magnon/observables.hpp"
#include "magnon/propagator.hpp"

namespace magnon {

inline int default_workers() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs fn(0..items-1) on up to `workers` threads.  Exceptions propagate from
// the first failing item.
inline void parallel_for(int items, int workers, const std::function<void(int)>& fn) {
  workers = std::max(1, std::min(workers, items));
  if (workers == 1) {
    for (int i = 0; i < items; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (!failed.load(std::memory_order_relaxed)) {
        const int i = next.fetch_add(1);
        if (i >= items) break;
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

struct ExperimentResult {
  std::string name;
  nlohmann::json spec;
  nlohmann::json profile;
  DataTable data;
  std::vector<Check> checks;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

inline std::filesystem::path write_artifacts(const ExperimentResult& result,
                                             const std::filesystem::path& outdir,
                                             bool json_rows = false) {
  const std::string key = result.spec.dump();
  const auto dir = outdir / result.name / hex64(fnv1a64(key));
  std::filesystem::create_directories(dir);
  write_csv(dir / "data.csv", result.data);
  if (json_rows) write_json_rows(dir / "data.json", result.data);
  nlohmann::json manifest{{"spec", result.spec},
                          {"profile", result.profile},
                          {"tool_version", kToolVersion},
                          {"checks", result.checks}};
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  return dir;
}

namespace detail {

inline std::vector<double> time_grid(double start, double stop, double step) {
  std::vector<double> ts;
  const long long n = static_cast<long long>(std::llround((stop - start) / step));
  ts.reserve(n + 1);
  for (long long i = 0; i <= n; ++i) ts.push_back(start + i * step);
  return ts;
}

// Strictly moving part of a state: drops the two zero-velocity momentum
// modes (n = 0 and n = -N/2) and the counter-propagating half.
inline SingleExcitationState moving_component(const SingleExcitationState& state,
                                              Branch branch) {
  const int N = state.sites();
  MomentumState m = to_momentum(state);
  for (int slot = 0; slot < N; ++slot) {
    const int n = momentum_index(slot, N);
    const bool keep = branch == Branch::Plus ? n > 0 && n != N / 2 : n < 0 && n != -N / 2;
    if (!keep) m.d(slot) = 0.0;
  }
  return from_momentum(m);
}

struct WindowStats {
  double weight = 0.0;
  double rms = 0.0;
};

// Probability weight and RMS width of |f|^2 inside +-half_width sites of a
// (possibly fractional) center, measured about the windowed centroid.
inline WindowStats window_stats(const SingleExcitationState& state, double center,
                                int half_width) {
  const int N = state.sites();
  const int c0 = static_cast<int>(std::lround(center));
  const double base = center - c0;
  double w = 0.0, mean = 0.0;
  for (int off = -half_width; off <= half_width; ++off) {
    const double p = std::norm(state.f(((c0 + off) % N + N) % N));
    w += p;
    mean += p * (off - base);
  }
  if (w <= 0.0) return {0.0, 0.0};
  mean /= w;
  double var = 0.0;
  for (int off = -half_width; off <= half_width; ++off) {
    const double p = std::norm(state.f(((c0 + off) % N + N) % N));
    const double d = off - base - mean;
    var += p * d * d;
  }
  return {w, std::sqrt(var / w)};
}

inline Check check_ge(const std::string& name, double measured, double bound) {
  return {name, ">=", bound, measured, measured >= bound};
}

inline Check check_le(const std::string& name, double measured, double bound) {
  return {name, "<=", bound, measured, measured <= bound};
}

inline Check check_near(const std::string& name, double measured, double expected,
                        double tol) {
  return {name, "~", expected, measured, std::abs(measured - expected) <= tol};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Delta-pulse heatmap: |f_j(t)|^2 on a full-coupling ring over one recurrence
// period.  The data shows two straight ridges of slope +-N/2pi.
inline ExperimentResult run_delta_heatmap(int N = 100,
                                          int workers = default_workers()) {
  const Topology topo = Topology::ring(N);
  const CouplingProfile profile = build_couplings(topo, std::nullopt);
  const CirculantSymbol symbol = build_symbol(profile, topo);
  const int site = N / 2;
  const SingleExcitationState psi0 = delta_state(N, site);

  const double step = 2.0 * kPi / 400.0;
  const std::vector<double> ts = detail::time_grid(0.0, 2.0 * kPi, step);

  ExperimentResult res;
  res.name = "delta_heatmap";
  res.spec = {{"experiment", res.name},
              {"topology", "ring"},
              {"sites", N},
              {"initial", "delta:" + std::to_string(site)},
              {"propagator", "ring_fft"},
              {"times", {{"start", 0.0}, {"stop", 2.0 * kPi}, {"step", step}}},
              {"observable", "site_probability"}};
  to_json(res.profile, profile);

  res.data.columns.push_back("t");
  for (int j = 0; j < N; ++j) res.data.columns.push_back("p" + std::to_string(j));
  res.data.rows.assign(ts.size(), {});
  parallel_for(static_cast<int>(ts.size()), workers, [&](int i) {
    const SingleExcitationState psi = evolve_ring_fft(symbol, psi0, ts[i]);
    std::vector<double> row;
    row.reserve(N + 1);
    row.push_back(ts[i]);
    for (int j = 0; j < N; ++j) row.push_back(std::norm(psi.f(j)));
    res.data.rows[i] = std::move(row);
  });

  // Ridge fit: right-mover argmax at discrete instants, least-squares slope.
  // Starts once the two packets are separated by more than the search window.
  std::vector<double> fit_t, fit_x;
  const int window = 8;
  for (int s = std::max(window, N / 10); s <= 9 * N / 20; ++s) {
    const double t = 2.0 * kPi * s / N;
    const SingleExcitationState psi = evolve_ring_fft(symbol, psi0, t);
    int best = 0;
    double pbest = -1.0;
    for (int off = -window; off <= window; ++off) {
      const int j = ((site + s + off) % N + N) % N;
      if (std::norm(psi.f(j)) > pbest) {
        pbest = std::norm(psi.f(j));
        best = site + s + off;  // unwrapped coordinate
      }
    }
    fit_t.push_back(t);
    fit_x.push_back(best);
  }
  double st = 0, sx = 0, stt = 0, stx = 0;
  for (size_t i = 0; i < fit_t.size(); ++i) {
    st += fit_t[i];
    sx += fit_x[i];
    stt += fit_t[i] * fit_t[i];
    stx += fit_t[i] * fit_x[i];
  }
  const double m = fit_t.size();
  const double slope = (m * stx - st * sx) / (m * stt - st * st);
  const double v = N / (2.0 * kPi);

  const SingleExcitationState back = evolve_ring_fft(symbol, psi0, 2.0 * kPi);
  res.checks.push_back(detail::check_near("ridge_slope", slope, v, 0.02 * v));
  res.checks.push_back(
      detail::check_ge("recurrence_amplitude", autocorrelation(psi0, back), 0.98));
  res.checks.push_back(
      detail::check_ge("recurrence_probability", std::norm(back.f(site)), 0.97));
  res.checks.push_back(detail::check_near(
      "initial_delta", res.data.rows.front()[1 + site], 1.0, 1e-12));
  return res;
}

// ---------------------------------------------------------------------------
// Gaussian packet heatmap.  Checks: both half-ring weights stay at 1/2, and
// the RMS width of the strictly moving branch content (measured in a window
// riding along with the branch) drifts by no more than 10% across the middle
// third of the transit.
inline ExperimentResult run_gaussian_heatmap(int N = 100, double alpha = 0.1,
                                             int workers = default_workers()) {
  const Topology topo = Topology::ring(N);
  const CouplingProfile profile = build_couplings(topo, std::nullopt);
  const CirculantSymbol symbol = build_symbol(profile, topo);
  const int site = N / 2;
  const SingleExcitationState psi0 = gaussian_state(topo, site, alpha);

  const double step = 2.0 * kPi / 400.0;
  const std::vector<double> ts = detail::time_grid(0.0, 2.0 * kPi, step);

  ExperimentResult res;
  res.name = "gaussian_heatmap";
  res.spec = {{"experiment", res.name},
              {"topology", "ring"},
              {"sites", N},
              {"initial", "gaussian:" + std::to_string(site) + ":" + format_double(alpha)},
              {"propagator", "ring_fft"},
              {"times", {{"start", 0.0}, {"stop", 2.0 * kPi}, {"step", step}}},
              {"observable", "site_probability"}};
  to_json(res.profile, profile);

  res.data.columns.push_back("t");
  for (int j = 0; j < N; ++j) res.data.columns.push_back("p" + std::to_string(j));
  res.data.rows.assign(ts.size(), {});
  parallel_for(static_cast<int>(ts.size()), workers, [&](int i) {
    const SingleExcitationState psi = evolve_ring_fft(symbol, psi0, ts[i]);
    std::vector<double> row;
    row.reserve(N + 1);
    row.push_back(ts[i]);
    for (int j = 0; j < N; ++j) row.push_back(std::norm(psi.f(j)));
    res.data.rows[i] = std::move(row);
  });

  // Reference width: moving branch content of the initial state.
  const double v = N / (2.0 * kPi);
  const detail::WindowStats w0 = detail::window_stats(
      detail::moving_component(psi0, Branch::Plus), site, N / 4);

  double wmin = 1.0, wmax = 0.0, drift = 0.0;
  const int samples = 25;
  for (int i = 0; i < samples; ++i) {
    const double t = kPi / 3.0 + (kPi / 3.0) * i / (samples - 1);
    const SingleExcitationState psi = evolve_ring_fft(symbol, psi0, t);
    const double wr = packet_weight(psi, site, N / 2);             // [site, site+N/2)
    const double wl = packet_weight(psi, (site + N / 2) % N, N / 2);
    wmin = std::min({wmin, wr, wl});
    wmax = std::max({wmax, wr, wl});
    const detail::WindowStats wp = detail::window_stats(
        detail::moving_component(psi, Branch::Plus), site + v * t, N / 4);
    const detail::WindowStats wm = detail::window_stats(
        detail::moving_component(psi, Branch::Minus), site - v * t, N / 4);
    drift = std::max({drift, std::abs(wp.rms - w0.rms) / w0.rms,
                      std::abs(wm.rms - w0.rms) / w0.rms});
  }

  double init_err = 0.0;
  for (int j = 0; j < N; ++j)
    init_err = std::max(init_err,
                        std::abs(res.data.rows.front()[1 + j] - std::norm(psi0.f(j))));

  res.checks.push_back(detail::check_le("branch_width_drift", drift, 0.10));
  res.checks.push_back(detail::check_ge("branch_weight_min", wmin, 0.48));
  res.checks.push_back(detail::check_le("branch_weight_max", wmax, 0.52));
  res.checks.push_back(detail::check_le("initial_profile_error", init_err, 1e-12));
  return res;
}

// ---------------------------------------------------------------------------
// Truncation scan: A_max = max |<psi0|psi(t)>| over the window after the
// initial decay, per (N, r0).  Uses the dense spectral route, parallel over
// work items.  The scan window starts at pi/4 to exclude the trivial
// |A(0)| = 1 peak.
struct TruncationPoint {
  int sites = 0;
  int truncation = 0;
  double a_max = 0.0;
  double t_at_max = 0.0;
};

inline ExperimentResult run_truncation_scan(std::vector<int> Ns = {500, 1000},
                                            std::vector<int> r0s = {10, 20, 30, 40, 50,
                                                                    60, 70, 80, 90, 100},
                                            int workers = default_workers()) {
  struct Item {
    int N, r0;
  };
  std::vector<Item> items;
  for (int N : Ns)
    for (int r0 : r0s) items.push_back({N, r0});

  std::vector<TruncationPoint> points(items.size());
  parallel_for(static_cast<int>(items.size()), workers, [&](int i) {
    const auto [N, r0] = items[i];
    const Topology topo = Topology::ring(N);
    const CouplingProfile profile = build_couplings(topo, r0);
    const SpectralDecomposition decomp =
        SpectralDecomposition::compute(build_dense(profile, topo));
    const AutocorrelationKernel kernel =
        autocorrelation_kernel(decomp, delta_state(N, N / 2));
    const ScanResult scan =
        max_autocorrelation(kernel, kPi / 4.0, 3.0 * kPi, 2.0 * kPi / (10.0 * N));
    points[i] = {N, r0, scan.max_value, scan.argmax};
  });

  ExperimentResult res;
  res.name = "truncation_scan";
  res.spec = {{"experiment", res.name},
              {"topology", "ring"},
              {"sites", Ns},
              {"truncations", r0s},
              {"initial", "delta:center"},
              {"propagator", "spectral_dense"},
              {"window", {{"start", kPi / 4.0}, {"stop", 3.0 * kPi}}},
              {"observable", "max_autocorrelation"}};
  res.profile = nlohmann::json::array();
  for (const auto& it : items) {
    nlohmann::json pj;
    to_json(pj, build_couplings(Topology::ring(it.N), it.r0));
    res.profile.push_back(std::move(pj));
  }
  res.data.columns = {"sites", "r0", "a_max", "t_at_max"};
  for (const auto& p : points)
    res.data.rows.push_back({double(p.sites), double(p.truncation), p.a_max, p.t_at_max});

  // Monotonicity in r0 (per N, 0.01 noise allowance).
  double worst_drop = 0.0;
  for (size_t i = 0; i < items.size(); ++i)
    for (size_t j = i + 1; j < items.size(); ++j)
      if (items[i].N == items[j].N && items[j].r0 > items[i].r0)
        worst_drop = std::max(worst_drop, points[i].a_max - points[j].a_max);
  res.checks.push_back(detail::check_le("monotone_drop", worst_drop, 0.01));

  // A_max at r0 = 90 for every N.
  for (const auto& p : points)
    if (p.truncation == 90)
      res.checks.push_back(detail::check_ge(
          "a_max_r0_90_N" + std::to_string(p.sites), p.a_max, 0.99));

  // Spread across N at fixed r0.
  double spread = 0.0;
  for (int r0 : r0s) {
    double lo = 2.0, hi = -1.0;
    for (const auto& p : points)
      if (p.truncation == r0) {
        lo = std::min(lo, p.a_max);
        hi = std::max(hi, p.a_max);
      }
    if (hi >= lo) spread = std::max(spread, hi - lo);
  }
  res.checks.push_back(detail::check_le("n_spread", spread, 0.02));
  return res;
}

// ---------------------------------------------------------------------------
// Open-chain concurrence between sites N/2 +- l after launching a flip at the
// chain center, one curve per truncation distance.
inline ExperimentResult run_open_chain_concurrence(
    int N = 1000, int l = 400, std::vector<int> r0s = {10, 15, 20, 30, 500},
    int workers = default_workers()) {
  const Topology topo = Topology::chain(N);
  const int site = N / 2;
  const int a = site + l, b = site - l;
  if (a >= N || b < 0) throw std::invalid_argument("separation exceeds the chain");

  const double step = 2.0 * kPi / 400.0;
  const std::vector<double> ts = detail::time_grid(0.0, 3.0 * kPi, step);

  ExperimentResult res;
  res.name = "open_chain_concurrence";
  res.spec = {{"experiment", res.name},
              {"topology", "chain"},
              {"sites", N},
              {"separation", l},
              {"truncations", r0s},
              {"initial", "delta:" + std::to_string(site)},
              {"propagator", "spectral_dense"},
              {"times", {{"start", 0.0}, {"stop", 3.0 * kPi}, {"step", step}}},
              {"observable", "concurrence"}};
  res.profile = nlohmann::json::array();
  for (int r0 : r0s) {
    nlohmann::json pj;
    to_json(pj, build_couplings(topo, r0));
    res.profile.push_back(std::move(pj));
  }

  res.data.columns = {"t", "r0", "value", "value_symmetrized", "i_site", "j_site"};
  res.data.rows.assign(ts.size() * r0s.size(), {});
  std::vector<double> peaks(r0s.size(), 0.0);

  parallel_for(static_cast<int>(r0s.size()), workers, [&](int ri) {
    const int r0 = r0s[ri];
    const CouplingProfile profile = build_couplings(topo, r0);
    const SpectralDecomposition decomp =
        SpectralDecomposition::compute(build_dense(profile, topo));
    const Eigen::VectorXd c = decomp.eigenvectors.row(site).transpose();
    const Eigen::VectorXd ua = decomp.eigenvectors.row(a).transpose().cwiseProduct(c);
    const Eigen::VectorXd ub = decomp.eigenvectors.row(b).transpose().cwiseProduct(c);
    double peak = 0.0;
    for (size_t i = 0; i < ts.size(); ++i) {
      Complex fa(0.0, 0.0), fb(0.0, 0.0);
      for (int m = 0; m < N; ++m) {
        const Complex ph = std::exp(Complex(0.0, -decomp.eigenvalues(m) * ts[i]));
        fa += ua(m) * ph;
        fb += ub(m) * ph;
      }
      const Complex z = fa * std::conj(fb);
      const double c_std = 2.0 * std::abs(z);
      const double c_sym = std::abs(2.0 * z.real());
      peak = std::max(peak, c_std);
      res.data.rows[i * r0s.size() + ri] = {ts[i],   double(r0), c_std,
                                            c_sym,   double(a),  double(b)};
    }
    peaks[ri] = peak;
  });

  for (size_t ri = 0; ri < r0s.size(); ++ri)
    if (r0s[ri] == N / 2)
      res.checks.push_back(
          detail::check_near("peak_full_range", peaks[ri], 0.5, 0.03));
  double largest = 0.0;
  for (size_t ri = 0; ri < r0s.size(); ++ri)
    if (r0s[ri] == N / 2) largest = peaks[ri];
  for (size_t ri = 0; ri < r0s.size(); ++ri)
    if (r0s[ri] != N / 2)
      res.checks.push_back(detail::check_le(
          "peak_r0_" + std::to_string(r0s[ri]) + "_below_full", peaks[ri],
          largest - 1e-6));
  res.checks.push_back(
      detail::check_le("initial_concurrence", res.data.rows.front()[2], 1e-12));
  return res;
}

// ---------------------------------------------------------------------------
// Concurrence timing on the idealized linear-dispersion ring: the mirror pair
// at distance j lights up to C = 1/2 at t0 = 2pi j / N and to 2/pi^2 at
// t1 = 2pi (j+1) / N.
inline ExperimentResult run_concurrence_timing(int N = 1000,
                                               std::vector<int> js = {100, 250},
                                               int workers = default_workers()) {
  const int site = N / 2;
  const SingleExcitationState psi0 = delta_state(N, site);

  ExperimentResult res;
  res.name = "concurrence_timing";
  res.spec = {{"experiment", res.name},
              {"topology", "ring"},
              {"sites", N},
              {"mirror_offsets", js},
              {"initial", "delta:" + std::to_string(site)},
              {"propagator", "exact_linear"},
              {"observable", "concurrence"}};
  res.profile = {{"family", "exact_linear"}, {"sites", N}};

  res.data.columns = {"t", "value", "value_symmetrized", "j", "i_site", "j_site"};
  struct Probe {
    int j;
    double t;
    const char* tag;
    double expected;
    double tol;
  };
  std::vector<Probe> probes;
  for (int j : js) {
    probes.push_back({j, 2.0 * kPi * j / N, "t0", 0.5, 0.02});
    probes.push_back({j, 2.0 * kPi * (j + 1) / N, "t1", 2.0 / (kPi * kPi), 0.02});
    probes.push_back({j, kPi * j / N, "t0_half", 0.05, -1.0});  // upper bound
  }
  std::vector<double> measured(probes.size());
  parallel_for(static_cast<int>(probes.size()), workers, [&](int i) {
    const SingleExcitationState psi = evolve_exact_linear(psi0, probes[i].t);
    measured[i] = concurrence(psi, (site + probes[i].j) % N,
                              ((site - probes[i].j) % N + N) % N);
  });
  for (size_t i = 0; i < probes.size(); ++i) {
    const auto& p = probes[i];
    const SingleExcitationState psi = evolve_exact_linear(psi0, p.t);
    const int ia = (site + p.j) % N, ib = ((site - p.j) % N + N) % N;
    const double c_sym =
        concurrence(psi, ia, ib, ConcurrenceForm::Symmetrized);
    res.data.rows.push_back({p.t, measured[i], c_sym, double(p.j), double(ia),
                             double(ib)});
    const std::string name =
        std::string(p.tag) + "_j" + std::to_string(p.j);
    if (p.tol >= 0.0)
      res.checks.push_back(detail::check_near(name, measured[i], p.expected, p.tol));
    else
      res.checks.push_back(detail::check_le(name, measured[i], p.expected));
  }
  return res;
}

}  // namespace magnon
