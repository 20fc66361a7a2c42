#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "dirac/clifford.hpp"
#include "dirac/fields.hpp"
#include "dirac/grid.hpp"
#include "dirac/hardy.hpp"
#include "dirac/identities.hpp"
#include "dirac/radial.hpp"
#include "config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dirac;
using cli::RunConfig;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitNotCertifiable = 2;
constexpr int kExitError = 3;

int max_threads() {
  if (const char* env = std::getenv("DIRAC_SPECTRA_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 1;
}

void emit(const json& j, const std::string& out_dir, const std::string& filename) {
  if (out_dir.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    fs::create_directories(out_dir);
    std::ofstream f(fs::path(out_dir) / filename);
    f << j.dump(2) << "\n";
  }
}

void emit_text(const std::string& text, const std::string& out_dir,
               const std::string& filename) {
  if (out_dir.empty()) {
    std::cout << text;
  } else {
    fs::create_directories(out_dir);
    std::ofstream f(fs::path(out_dir) / filename);
    f << text;
  }
}

std::vector<std::pair<double, double>> load_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open data file " + path);
  std::vector<std::pair<double, double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double r, v;
    if (!(ss >> r >> v))
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected 'r,value'");
    rows.emplace_back(r, v);
  }
  return rows;
}

RadialProfile profile_from_config(const RunConfig& cfg, const std::string& prefix) {
  const std::string kind = cfg.get(prefix + ".profile", "power-law");
  if (kind == "power-law")
    return RadialProfile::power_law(cfg.get_num(prefix + ".c", 0.0),
                                    cfg.get_num(prefix + ".sigma", 1.0));
  if (kind == "log") return RadialProfile::log_coulomb(cfg.get_num(prefix + ".c", 0.0));
  if (kind == "file")
    return RadialProfile::sampled(load_samples(cfg.get(prefix + ".file", "")));
  throw std::runtime_error("config: unknown " + prefix + ".profile: " + kind);
}

PotentialSpec potential_from_config(const RunConfig& cfg, int d) {
  const std::string fam = cfg.get("potential.family", "zero");
  if (fam == "zero") return PotentialSpec::zero(d);
  if (fam == "coulomb")
    return PotentialSpec::matrix_coulomb(d, cfg.get_num("potential.nu", 0.0),
                                         cfg.get_num("potential.mu", 0.0),
                                         cfg.get_num("potential.delta", 0.0));
  if (fam == "electric") return PotentialSpec::electric(d, profile_from_config(cfg, "potential"));
  if (fam == "scalar") return PotentialSpec::scalar(d, profile_from_config(cfg, "potential"));
  if (fam == "anomalous")
    return PotentialSpec::anomalous(d, profile_from_config(cfg, "potential"));
  if (fam == "custom")
    return PotentialSpec::custom(
        d, RadialProfile::sampled(load_samples(cfg.get("potential.file", ""))));
  throw std::runtime_error("config: unknown potential.family: " + fam);
}

MagneticSpec magnetic_from_config(const RunConfig& cfg, int d) {
  const std::string fam = cfg.get("magnetic.family", "zero");
  if (fam == "zero") return MagneticSpec::zero(d);
  if (fam == "azimuthal") {
    if (d != 3) throw std::runtime_error("config: azimuthal magnetic field needs dimension 3");
    return MagneticSpec::azimuthal(profile_from_config(cfg, "magnetic"));
  }
  throw std::runtime_error("config: unknown magnetic.family: " + fam);
}

RadialProblem radial_from_config(const RunConfig& cfg, int kappa_flag) {
  RadialProblem p;
  p.nu = cfg.get_num("potential.nu", 0.0);
  p.mu = cfg.get_num("potential.mu", 0.0);
  p.delta = cfg.get_num("potential.delta", 0.0);
  p.m = cfg.get_num("mass", 1.0);
  p.kappa = kappa_flag != 0 ? kappa_flag : cfg.get_int("radial.kappa", -1);
  p.r_min = cfg.get_num("radial.r_min", 1e-4);
  p.r_max = cfg.get_num("radial.r_max", 200.0);
  p.n = cfg.get_int("radial.n", 4096);
  p.validate();
  return p;
}

std::pair<double, double> window_from_config(const RunConfig& cfg, const RadialProblem& p) {
  const double margin = cfg.get_num("ingap.margin", 1e-3 * p.m);
  double lo = -(p.m - margin), hi = p.m - margin;
  if (p.m == 0) {
    lo = -0.5;
    hi = 0.5;
  }
  lo = cfg.get_num("radial.window_lo", lo);
  hi = cfg.get_num("radial.window_hi", hi);
  return {lo, hi};
}

// ---------------------------------------------------------------- clifford

int cmd_clifford(int dim, const std::string& out_dir) {
  const DiracRep rep = build_dirac_rep(dim);
  bool ok = true;
  const ExactMatrix id = ExactMatrix::identity(rep.N);
  for (int j = 0; j < dim && ok; ++j)
    for (int k = j; k < dim && ok; ++k) {
      const ExactMatrix ac = anticommutator(rep.alphas[j], rep.alphas[k]);
      ok = j == k ? ac.is_identity_times(2) : ac.is_zero();
    }
  for (int j = 0; j < dim && ok; ++j)
    ok = anticommutator(rep.alphas[j], rep.beta).is_zero();
  if (ok) ok = (rep.beta * rep.beta) == id;

  json j = rep.to_json();
  j["relations_verified"] = ok;
  if (dim == 3) {
    const SpinSet spin = spin_and_T(rep);
    json sj;
    sj["T"] = spin.T.to_json();
    sj["S"] = json::array();
    for (const auto& s : spin.S) sj["S"].push_back(s.to_json());
    j["spin"] = sj;
  }
  emit(j, out_dir, "clifford.json");
  return ok ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------- check

int cmd_check(const RunConfig& cfg, const std::string& theorem_flag, int dim_flag,
              const std::string& out_dir) {
  const int d = dim_flag ? dim_flag : cfg.get_int("dimension", 3);
  const double m = cfg.get_num("mass", 0.0);
  const Theorem t = theorem_from_string(
      !theorem_flag.empty() ? theorem_flag : cfg.get("theorem", "general"));
  const DiracRep rep = build_dirac_rep(d);
  const PotentialSpec vspec = potential_from_config(cfg, d);
  const MagneticSpec aspec = magnetic_from_config(cfg, d);
  const WeightTable w = sup_weights(vspec, aspec, rep);
  const EpsilonBundle eps = derive_epsilons(w, d, t);
  const HypothesisReport rep_out = check_theorem(eps, d, m, t);

  json j = rep_out.to_json();
  j["weights"] = w.to_json();
  emit(j, out_dir, "check.json");
  switch (rep_out.verdict) {
    case Verdict::Holds: return kExitPass;
    case Verdict::Fails: return kExitFail;
    case Verdict::NotCertifiable: return kExitNotCertifiable;
  }
  return kExitError;
}

// ---------------------------------------------------------------- threshold

int cmd_threshold(const RunConfig& cfg, const std::string& theorem_flag, int dim_flag,
                  const std::string& family_name, const std::string& method,
                  const std::string& out_dir) {
  const int d = dim_flag ? dim_flag : cfg.get_int("dimension", 3);
  const double m = cfg.get_num("mass", 0.0);
  const Theorem t = theorem_from_string(
      !theorem_flag.empty() ? theorem_flag : cfg.get("theorem", "massless-electric"));
  const CouplingFamily fam = make_family(family_name, d, t);
  const ThresholdMethod meth = method == "bisection" ? ThresholdMethod::Bisection
                                                     : ThresholdMethod::ClosedForm;
  const double c = critical_coupling(t, d, m, fam, meth);
  json j = {{"theorem", to_string(t)}, {"d", d},       {"m", m},
            {"family", family_name},   {"method", method.empty() ? "closed-form" : method},
            {"critical_coupling", c}};
  emit(j, out_dir, "threshold.json");
  std::cout.precision(12);
  std::cout << c << "\n";
  return kExitPass;
}

// ---------------------------------------------------------------- identities

Eigen::VectorXcd random_direction(std::mt19937_64& rng, int N) {
  std::normal_distribution<double> nd;
  Eigen::VectorXcd u(N);
  for (int i = 0; i < N; ++i) u(i) = Cplx(nd(rng), nd(rng));
  return u.normalized();
}

int cmd_verify_identities(const RunConfig& cfg, unsigned seed, const std::string& out_dir) {
  const DiracRep rep = build_dirac_rep(3);
  std::mt19937_64 rng(seed);
  const int n = cfg.get_int("grid.n", 96);
  const double L = cfg.get_num("grid.L", 8.0);
  const BoxGrid g(L, n);

  json reports = json::array();
  bool all_pass = true;
  auto push = [&](const GriddedReport& r) {
    reports.push_back(r.to_json());
    all_pass = all_pass && r.pass;
  };

  const Eigen::VectorXcd u = random_direction(rng, rep.N);
  const TestSpinor psi = TestSpinor::gaussian(u, {0.5, 0.3, -0.2}, 1.0);
  const MagneticSpec a0 = MagneticSpec::zero(3);

  push(verify_multiplier(1, rep, a0, psi, g));
  push(verify_multiplier(3, rep, a0, psi, g, {}, {}, 1.0));
  {
    const int N = rep.N;
    Eigen::VectorXd dv(N);
    std::uniform_real_distribution<double> ud(0.5, 2.0);
    for (int i = 0; i < N; ++i) dv(i) = ud(rng);
    auto M = [dv, N](const Eigen::Vector3d& x) -> Mat {
      return (1.0 / (1.0 + x.squaredNorm())) * dv.cast<Cplx>().asDiagonal() *
             Mat::Identity(N, N);
    };
    auto xdM = [dv, N](const Eigen::Vector3d& x) -> Mat {
      const double r2 = x.squaredNorm();
      return (-2.0 * r2 / ((1.0 + r2) * (1.0 + r2))) * dv.cast<Cplx>().asDiagonal() *
             Mat::Identity(N, N);
    };
    push(verify_multiplier(2, rep, a0, psi, g, M, xdM));
  }
  {
    const MagneticSpec az = MagneticSpec::azimuthal(RadialProfile::power_law(0.1, 0.0));
    const BoxGrid gs(L, std::min(n, 48));
    push(verify_squaring(rep, az, 1.0, psi, gs, 1));
  }
  {
    const TestSpinor bump = TestSpinor::gaussian(random_direction(rng, rep.N), {3.75, 0, 0}, 0.5);
    const PotentialSpec vel = PotentialSpec::electric(3, RadialProfile::power_law(0.3, 1.0));
    push(verify_anticommutator_expansion(rep, a0, vel, 0.5, bump, g));
  }
  {
    const SpinSet spin = spin_and_T(rep);
    const MagneticSpec az = MagneticSpec::azimuthal(RadialProfile::power_law(0.2, 1.0));
    const RadialProfile phi = RadialProfile::log_coulomb(0.4);
    std::vector<AmPointData> pts;
    std::uniform_real_distribution<double> ud(-2.0, 2.0);
    for (int i = 0; i < 20; ++i) {
      Eigen::Vector3d x(ud(rng), ud(rng), ud(rng));
      if (x.norm() < 0.3) x += Eigen::Vector3d(1, 1, 1);
      pts.push_back(am_point_data(phi, az, x));
    }
    for (const auto& r : verify_am_identities(rep, spin, pts, true)) {
      reports.push_back({{"identity", r.identity},
                         {"max_error", r.max_error},
                         {"pass", r.pass}});
      all_pass = all_pass && r.pass;
    }
  }
  {
    const TestSpinor bump = TestSpinor::gaussian(random_direction(rng, rep.N), {3, 0, 0}, 0.7);
    const DecayTable t = verify_cutoff_decay(bump, BoxGrid(16.0, 32), {2, 4, 8});
    reports.push_back(t.to_json());
    all_pass = all_pass && t.strictly_decreasing;
  }
  {
    const TestSpinor shell = TestSpinor::cutoff_composed(random_direction(rng, rep.N), 1.0, 5.0);
    const HardyDiamagnetic hd = hardy_and_diamagnetic_check(shell, a0, g);
    const bool ok = hd.hardy_ratio <= 4.0 + 1e-2 && hd.diamagnetic_gap <= 1e-8;
    reports.push_back({{"identity", "hardy-diamagnetic"},
                       {"hardy_ratio", hd.hardy_ratio},
                       {"diamagnetic_gap", hd.diamagnetic_gap},
                       {"pass", ok}});
    all_pass = all_pass && ok;
  }

  emit(json{{"seed", seed}, {"reports", reports}, {"all_pass", all_pass}}, out_dir,
       "identities.json");
  return all_pass ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------- spectrum

json oracle_comparison(const RadialProblem& p, const std::vector<RefinementVerdict>& verdicts) {
  json j = json::array();
  const bool applicable =
      p.nu < 0 && p.mu == 0 && p.delta == 0 && p.m > 0 && std::abs(p.nu) < std::abs(p.kappa);
  if (!applicable) return j;
  for (const auto& v : verdicts) {
    if (!v.persistent()) continue;
    double best = std::numeric_limits<double>::infinity();
    int best_nr = -1;
    for (int nr = p.kappa > 0 ? 1 : 0; nr <= 20; ++nr) {
      const double e = sommerfeld(p.nu, p.kappa, nr, p.m);
      if (std::abs(e - v.lambda) < best) {
        best = std::abs(e - v.lambda);
        best_nr = nr;
      }
    }
    j.push_back({{"lambda", v.lambda},
                 {"n_r", best_nr},
                 {"oracle", sommerfeld(p.nu, p.kappa, best_nr, p.m)},
                 {"rel_error", best / std::abs(v.lambda)}});
  }
  return j;
}

int run_channel(const RunConfig& cfg, const RadialProblem& p, std::string& csv,
                json& channels) {
  const auto [lo, hi] = window_from_config(cfg, p);
  RefinementOptions opt;
  opt.drift_tol = cfg.get_num("persistence.drift_tol", 1e-4);
  opt.loc_tol = cfg.get_num("persistence.loc_tol", 0.99);
  const SpectrumResult base = solve(p, lo, hi, cfg.get_num("ingap.margin", 1e-3 * p.m));
  const auto verdicts = refinement_study(p, lo, hi, opt);

  int persistent_count = 0;
  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    const int idx = base.in_gap[i];
    append_spectrum_csv(csv, p, base.eigenvalues[idx], base.residuals[idx],
                        base.localizations[idx], verdicts[i].persistent());
    if (verdicts[i].persistent()) ++persistent_count;
  }
  json cj = {{"kappa", p.kappa},
             {"window", {lo, hi}},
             {"in_gap", static_cast<int>(verdicts.size())},
             {"persistent", persistent_count},
             {"oracle", oracle_comparison(p, verdicts)}};
  if (persistent_count == 0)
    cj["note"] = "no persistent eigenvalue found (numerics cannot prove absence)";
  channels.push_back(cj);
  return persistent_count;
}

int cmd_spectrum(const RunConfig& cfg, int kappa_flag, const std::string& out_dir,
                 bool want_csv) {
  const RadialProblem p = radial_from_config(cfg, kappa_flag);
  std::string csv = spectrum_csv_header();
  json channels = json::array();
  run_channel(cfg, p, csv, channels);
  emit(json{{"problem",
             {{"nu", p.nu}, {"mu", p.mu}, {"delta", p.delta}, {"m", p.m},
              {"kappa", p.kappa}, {"n", p.n}, {"r_max", p.r_max}}},
            {"channels", channels}},
       out_dir, "spectrum.json");
  if (want_csv || !out_dir.empty()) emit_text(csv, out_dir, "spectrum.csv");
  return kExitPass;
}

// ---------------------------------------------------------------- sweep

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::istringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
  return out;
}

int cmd_sweep(const RunConfig& cfg, const std::string& out_dir, bool want_csv) {
  const std::vector<int> kappas = parse_int_list(cfg.get("sweep.kappas", "-1,1"));
  const double nu_min = cfg.get_num("sweep.nu_min", cfg.get_num("potential.nu", 0.0));
  const double nu_max = cfg.get_num("sweep.nu_max", nu_min);
  const int steps = cfg.get_int("sweep.nu_steps", 1);

  std::vector<RadialProblem> jobs;
  for (int k : kappas)
    for (int s = 0; s < steps; ++s) {
      RadialProblem p = radial_from_config(cfg, k);
      p.nu = steps == 1 ? nu_min : nu_min + (nu_max - nu_min) * s / (steps - 1);
      jobs.push_back(p);
    }

  const int threads = std::min<int>(max_threads(), static_cast<int>(jobs.size()));
  std::vector<std::string> csvs(jobs.size());
  std::vector<json> channel_json(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      json ch = json::array();
      run_channel(cfg, jobs[i], csvs[i], ch);
      channel_json[i] = ch[0];
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < threads - 1; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::string csv = spectrum_csv_header();
  json channels = json::array();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    csv += csvs[i];
    json cj = channel_json[i];
    cj["nu"] = jobs[i].nu;
    channels.push_back(cj);
  }
  emit(json{{"jobs", static_cast<int>(jobs.size())}, {"channels", channels}}, out_dir,
       "sweep.json");
  if (want_csv || !out_dir.empty()) emit_text(csv, out_dir, "sweep.csv");
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral toolkit for electromagnetic Dirac operators"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, theorem, family, method, out_dir;
  int dim = 0, kappa = 0;
  unsigned seed = 1;
  bool json_flag = false, csv_flag = false;
  app.add_option("--config", config_path, "INI config file");
  app.add_option("--theorem", theorem, "theorem selector");
  app.add_option("--dim", dim, "spatial dimension");
  app.add_option("--kappa", kappa, "partial-wave channel");
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_flag("--json", json_flag, "emit JSON to stdout");
  app.add_flag("--csv", csv_flag, "emit CSV to stdout");

  auto* c_clifford = app.add_subcommand("clifford", "build and verify a Dirac representation");
  auto* c_check = app.add_subcommand("check", "evaluate a theorem's smallness hypothesis");
  auto* c_threshold = app.add_subcommand("threshold", "critical coupling of a family");
  c_threshold->add_option("--family", family, "coupling family name");
  c_threshold->add_option("--method", method, "closed-form or bisection");
  auto* c_verify = app.add_subcommand("verify-identities", "run the identity suite");
  auto* c_spectrum = app.add_subcommand("spectrum", "radial solve with refinement study");
  auto* c_sweep = app.add_subcommand("sweep", "coupling/kappa sweep");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg;
    if (!config_path.empty()) cfg = RunConfig::from_file(config_path);

    if (c_clifford->parsed()) return cmd_clifford(dim ? dim : cfg.get_int("dimension", 3), out_dir);
    if (c_check->parsed()) return cmd_check(cfg, theorem, dim, out_dir);
    if (c_threshold->parsed()) {
      if (family.empty()) family = cfg.get("family", "coulomb-electric");
      return cmd_threshold(cfg, theorem, dim, family, method, out_dir);
    }
    if (c_verify->parsed()) return cmd_verify_identities(cfg, seed, out_dir);
    if (c_spectrum->parsed()) return cmd_spectrum(cfg, kappa, out_dir, csv_flag);
    if (c_sweep->parsed()) return cmd_sweep(cfg, out_dir, csv_flag);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
