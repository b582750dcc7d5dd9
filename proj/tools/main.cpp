// Command-line front end: coupling-profile synthesis, single simulations with
// CSV/JSON artifacts, and the scripted reproduction runs.
//
// Exit codes: 0 success, 2 usage error, 3 numerical cross-check failure,
// 4 reproduction check failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "magnon/magnon.hpp"

namespace {

using namespace magnon;
namespace fs = std::filesystem;

constexpr int kExitUsage = 2;
constexpr int kExitCrosscheck = 3;
constexpr int kExitChecks = 4;

struct TimeRange {
  double start = 0.0;
  double stop = 2.0 * kPi;
  double step = 2.0 * kPi / 400.0;
};

TimeRange parse_times(const std::string& s) {
  TimeRange tr;
  if (std::sscanf(s.c_str(), "%lf:%lf:%lf", &tr.start, &tr.stop, &tr.step) != 3 ||
      tr.step <= 0.0 || tr.stop < tr.start)
    throw std::invalid_argument("--times expects start:stop:step with step > 0");
  return tr;
}

std::optional<int> parse_r0(const std::string& s, const Topology& topo) {
  if (s == "full") return std::nullopt;
  int v = 0;
  try {
    v = std::stoi(s);
  } catch (...) {
    throw std::invalid_argument("--r0 expects an integer or 'full'");
  }
  if (v < 1 || v > topo.max_truncation())
    throw std::invalid_argument(topo.is_ring() ? "r0 exceeds N/2 (or is below 1)"
                                               : "r0 exceeds N-1 (or is below 1)");
  return v;
}

SingleExcitationState parse_initial(const std::string& desc, const Topology& topo) {
  const int N = topo.sites;
  std::vector<std::string> parts;
  size_t pos = 0;
  while (pos <= desc.size()) {
    const size_t next = desc.find(':', pos);
    parts.push_back(desc.substr(pos, next == std::string::npos ? next : next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (parts.empty()) throw std::invalid_argument("empty --initial descriptor");
  if (parts[0] == "delta") {
    if (parts.size() != 2) throw std::invalid_argument("use delta:SITE");
    return delta_state(N, std::stoi(parts[1]));
  }
  if (parts[0] == "gaussian") {
    if (parts.size() != 3) throw std::invalid_argument("use gaussian:SITE:ALPHA");
    return gaussian_state(topo, std::stoi(parts[1]), std::stod(parts[2]));
  }
  if (parts[0] == "symmetric") {
    // symmetric:SITE:even|odd:F0:c1,c2,...
    if (parts.size() != 5)
      throw std::invalid_argument("use symmetric:SITE:even|odd:F0:c1,c2,...");
    const Parity parity = parts[2] == "odd" ? Parity::Odd : Parity::Even;
    if (parts[2] != "odd" && parts[2] != "even")
      throw std::invalid_argument("parity must be even or odd");
    std::vector<Complex> wing;
    std::string item;
    std::istringstream ss(parts[4]);
    while (std::getline(ss, item, ','))
      if (!item.empty()) wing.emplace_back(std::stod(item), 0.0);
    return symmetric_state(topo, std::stoi(parts[1]),
                           Complex(std::stod(parts[3]), 0.0), wing, parity);
  }
  throw std::invalid_argument("unknown initial state '" + parts[0] + "'");
}

fs::path default_outdir() {
  if (const char* env = std::getenv("MAGNON_OUTDIR")) return env;
  return "out";
}

void print_checks(const std::vector<Check>& checks) {
  for (const auto& c : checks) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": measured "
              << format_double(c.measured) << " expected " << c.relation << ' '
              << format_double(c.expected) << '\n';
  }
}

// ---------------------------------------------------------------------------

struct SimulateConfig {
  std::string topology = "ring";
  int sites = 100;
  std::string r0 = "full";
  std::string sign = "negative";
  std::string initial = "delta:50";
  std::string times = "";
  std::string observe = "probability";
  std::string outdir;
  std::string format = "csv";
  int workers = default_workers();
  bool no_crosscheck = false;
  long long seed = 0;
};

nlohmann::json simulate_spec_json(const SimulateConfig& cfg, const TimeRange& tr) {
  return {{"experiment", "simulate"},
          {"topology", cfg.topology},
          {"sites", cfg.sites},
          {"r0", cfg.r0},
          {"sign", cfg.sign},
          {"initial", cfg.initial},
          {"times", {{"start", tr.start}, {"stop", tr.stop}, {"step", tr.step}}},
          {"observable", cfg.observe},
          {"seed", cfg.seed}};
}

int run_simulate(const SimulateConfig& cfg) {
  const Topology topo = cfg.topology == "chain" ? Topology::chain(cfg.sites)
                                                : Topology::ring(cfg.sites);
  const std::optional<int> r0 = parse_r0(cfg.r0, topo);
  const HoppingSign sign = hopping_sign_from_string(cfg.sign);
  const CouplingProfile profile = build_couplings(topo, r0, sign);
  const SingleExcitationState psi0 = parse_initial(cfg.initial, topo);
  const TimeRange tr = cfg.times.empty() ? TimeRange{} : parse_times(cfg.times);

  std::vector<double> ts;
  for (long long i = 0;; ++i) {
    const double t = tr.start + i * tr.step;
    if (t > tr.stop + tr.step * 1e-9) break;
    ts.push_back(t);
  }

  // Propagation route: momentum-space phases on rings, dense spectral route
  // on chains.
  std::optional<CirculantSymbol> symbol;
  std::optional<SpectralDecomposition> decomp;
  if (topo.is_ring())
    symbol = build_symbol(profile, topo);
  else
    decomp = SpectralDecomposition::compute(build_dense(profile, topo));
  auto evolve = [&](double t) {
    return topo.is_ring() ? evolve_ring_fft(*symbol, psi0, t)
                          : evolve_spectral(*decomp, psi0, t);
  };

  std::vector<Check> checks;
  if (topo.is_ring() && !cfg.no_crosscheck) {
    // Spot-check the momentum route against the dense spectral route at three
    // pseudo-random instants (fixed seed: reruns stay byte-identical).
    const SpectralDecomposition dense =
        SpectralDecomposition::compute(build_dense(profile, topo));
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> pick(tr.start, std::max(tr.stop, tr.start + 1.0));
    for (int c = 0; c < 3; ++c) {
      const double t = pick(rng);
      const SingleExcitationState a = evolve_ring_fft(*symbol, psi0, t);
      const SingleExcitationState b = evolve_spectral(dense, psi0, t);
      const double diff = (a.f - b.f).cwiseAbs().maxCoeff();
      checks.push_back({"crosscheck_t" + format_double(t), "<=", 1e-8, diff,
                        diff <= 1e-8});
    }
    for (const auto& c : checks)
      if (!c.pass) {
        std::cerr << "cross-check failed: " << c.name << " diff "
                  << format_double(c.measured) << " > 1e-8\n";
        return kExitCrosscheck;
      }
  }

  DataTable table;
  const int N = topo.sites;
  if (cfg.observe == "probability") {
    table.columns.push_back("t");
    for (int j = 0; j < N; ++j) table.columns.push_back("p" + std::to_string(j));
    table.rows.assign(ts.size(), {});
    parallel_for(static_cast<int>(ts.size()), cfg.workers, [&](int i) {
      const SingleExcitationState psi = evolve(ts[i]);
      std::vector<double> row{ts[i]};
      row.reserve(N + 1);
      for (int j = 0; j < N; ++j) row.push_back(std::norm(psi.f(j)));
      table.rows[i] = std::move(row);
    });
  } else if (cfg.observe == "autocorrelation") {
    table.columns = {"t", "value"};
    table.rows.assign(ts.size(), {});
    parallel_for(static_cast<int>(ts.size()), cfg.workers, [&](int i) {
      table.rows[i] = {ts[i], autocorrelation(psi0, evolve(ts[i]))};
    });
  } else if (cfg.observe.rfind("concurrence:", 0) == 0) {
    int si = 0, sj = 0;
    if (std::sscanf(cfg.observe.c_str(), "concurrence:%d:%d", &si, &sj) != 2)
      throw std::invalid_argument("use --observe concurrence:I:J");
    if (si < 0 || si >= N || sj < 0 || sj >= N || si == sj)
      throw std::invalid_argument("concurrence sites out of range");
    table.columns = {"t", "value", "value_symmetrized", "i_site", "j_site"};
    table.rows.assign(ts.size(), {});
    parallel_for(static_cast<int>(ts.size()), cfg.workers, [&](int i) {
      const SingleExcitationState psi = evolve(ts[i]);
      table.rows[i] = {ts[i], concurrence(psi, si, sj),
                       concurrence(psi, si, sj, ConcurrenceForm::Symmetrized),
                       double(si), double(sj)};
    });
  } else {
    throw std::invalid_argument("unknown observable '" + cfg.observe + "'");
  }

  ExperimentResult result;
  result.name = "simulate";
  result.spec = simulate_spec_json(cfg, tr);
  to_json(result.profile, profile);
  result.data = std::move(table);
  result.checks = std::move(checks);
  const fs::path dir = write_artifacts(
      result, cfg.outdir.empty() ? default_outdir() : fs::path(cfg.outdir),
      cfg.format == "json");
  std::cout << dir.string() << '\n';
  return 0;
}

SimulateConfig config_from_manifest(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot read manifest " + path.string());
  nlohmann::json m = nlohmann::json::parse(is);
  const auto& spec = m.at("spec");
  SimulateConfig cfg;
  cfg.topology = spec.at("topology").get<std::string>();
  cfg.sites = spec.at("sites").get<int>();
  cfg.r0 = spec.at("r0").get<std::string>();
  cfg.sign = spec.at("sign").get<std::string>();
  cfg.initial = spec.at("initial").get<std::string>();
  const auto& t = spec.at("times");
  cfg.times = format_double(t.at("start").get<double>()) + ":" +
              format_double(t.at("stop").get<double>()) + ":" +
              format_double(t.at("step").get<double>());
  cfg.observe = spec.at("observable").get<std::string>();
  cfg.seed = spec.value("seed", 0ll);
  return cfg;
}

int run_reproduce(const std::string& figure, int sites, int mirror_j, bool large,
                  const std::string& outdir, int workers) {
  ExperimentResult result;
  if (figure == "fig3") {
    result = run_delta_heatmap(sites > 0 ? sites : 100, workers);
  } else if (figure == "fig4") {
    result = run_gaussian_heatmap(sites > 0 ? sites : 100, 0.1, workers);
  } else if (figure == "fig5") {
    std::vector<int> Ns = {500, 1000};
    if (large) Ns.insert(Ns.end(), {1500, 2000});
    result = run_truncation_scan(Ns, {10, 20, 30, 40, 50, 60, 70, 80, 90, 100},
                                 workers);
  } else if (figure == "fig6") {
    result = run_open_chain_concurrence(sites > 0 ? sites : 1000, 400,
                                        {10, 15, 20, 30, 500}, workers);
  } else if (figure == "timing") {
    std::vector<int> js = mirror_j > 0 ? std::vector<int>{mirror_j}
                                       : std::vector<int>{100, 250};
    result = run_concurrence_timing(sites > 0 ? sites : 1000, js, workers);
  } else {
    throw std::invalid_argument("unknown figure '" + figure +
                                "' (use fig3|fig4|fig5|fig6|timing)");
  }
  const fs::path dir =
      write_artifacts(result, outdir.empty() ? default_outdir() : fs::path(outdir));
  std::cout << "artifacts: " << dir.string() << '\n';
  print_checks(result.checks);
  return result.all_pass() ? 0 : kExitChecks;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-excitation dynamics on rings and chains with "
               "inverse-square long-range couplings"};
  app.require_subcommand(1);

  // profile ------------------------------------------------------------
  auto* profile_cmd = app.add_subcommand("profile", "Print a coupling profile as JSON");
  int p_sites = 100;
  std::string p_r0 = "full", p_sign = "negative", p_topology = "ring", p_out;
  profile_cmd->add_option("-N,--sites", p_sites, "number of sites (even, >= 4)");
  profile_cmd->add_option("--r0", p_r0, "truncation distance or 'full'");
  profile_cmd->add_option("--sign", p_sign, "hopping sign: negative|positive");
  profile_cmd->add_option("--topology", p_topology, "ring|chain");
  profile_cmd->add_option("-o,--output", p_out, "write JSON here instead of stdout");

  // simulate -----------------------------------------------------------
  auto* sim_cmd = app.add_subcommand("simulate", "Evolve an initial state and export series");
  SimulateConfig sim;
  std::string sim_manifest;
  sim_cmd->add_option("--topology", sim.topology, "ring|chain");
  sim_cmd->add_option("-N,--sites", sim.sites, "number of sites");
  sim_cmd->add_option("--r0", sim.r0, "truncation distance or 'full'");
  sim_cmd->add_option("--sign", sim.sign, "negative|positive");
  sim_cmd->add_option("--initial", sim.initial,
                      "delta:SITE | gaussian:SITE:ALPHA | symmetric:SITE:even|odd:F0:c1,c2,...");
  sim_cmd->add_option("--times", sim.times, "time grid start:stop:step");
  sim_cmd->add_option("--observe", sim.observe,
                      "probability | autocorrelation | concurrence:I:J");
  sim_cmd->add_option("-o,--outdir", sim.outdir, "output directory");
  sim_cmd->add_option("--format", sim.format, "csv | json (csv always written)");
  sim_cmd->add_option("--workers", sim.workers, "worker thread count");
  sim_cmd->add_flag("--no-crosscheck", sim.no_crosscheck,
                    "skip the momentum-vs-spectral spot check on rings");
  sim_cmd->add_option("--seed", sim.seed,
                      "recorded in the manifest; dynamics are deterministic");
  sim_cmd->add_option("--from-manifest", sim_manifest,
                      "re-run the simulation described by a manifest.json");

  // reproduce ----------------------------------------------------------
  auto* rep_cmd = app.add_subcommand("reproduce", "Run a named reproduction experiment");
  std::string figure;
  int rep_sites = 0, rep_j = 0, rep_workers = default_workers();
  bool rep_large = false;
  std::string rep_out;
  rep_cmd->add_option("figure", figure, "fig3|fig4|fig5|fig6|timing")->required();
  rep_cmd->add_option("-N,--sites", rep_sites, "override system size");
  rep_cmd->add_option("-j,--mirror", rep_j, "mirror offset (timing only)");
  rep_cmd->add_flag("--large", rep_large, "include N in {1500, 2000} (fig5)");
  rep_cmd->add_option("-o,--outdir", rep_out, "output directory");
  rep_cmd->add_option("--workers", rep_workers, "worker thread count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (profile_cmd->parsed()) {
      const Topology topo = p_topology == "chain" ? Topology::chain(p_sites)
                                                  : Topology::ring(p_sites);
      const CouplingProfile prof =
          build_couplings(topo, parse_r0(p_r0, topo), hopping_sign_from_string(p_sign));
      nlohmann::json j;
      to_json(j, prof);
      if (p_out.empty())
        std::cout << j.dump(2) << '\n';
      else
        write_text(p_out, j.dump(2) + "\n");
      return 0;
    }
    if (sim_cmd->parsed()) {
      if (!sim_manifest.empty()) {
        SimulateConfig replay = config_from_manifest(sim_manifest);
        replay.outdir = sim.outdir;
        replay.workers = sim.workers;
        replay.no_crosscheck = sim.no_crosscheck;
        return run_simulate(replay);
      }
      return run_simulate(sim);
    }
    if (rep_cmd->parsed())
      return run_reproduce(figure, rep_sites, rep_j, rep_large, rep_out, rep_workers);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
