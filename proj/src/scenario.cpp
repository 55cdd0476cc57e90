#include "tgp/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

#include "tgp/errors.hpp"

namespace tgp {

using nlohmann::json;

const std::set<std::string>& all_outputs() {
  static const std::set<std::string> s{"populations", "coherences", "bloch_path",
                                       "gp_series", "tong_phase", "events"};
  return s;
}

SystemParams ScenarioConfig::system() const {
  SystemParams p;
  p.omega_q = omega_q;
  p.omega_r = omega_q - delta;
  p.E_c = E_c;
  p.g = g;
  return p;
}

void ScenarioConfig::validate() const {
  auto bad = [&](const std::string& m) { throw ConfigError(name + ": " + m); };
  if (!(t_end > 0) && !t_end_auto) bad("t_end must be positive");
  if (samples_per_tau < 2) bad("samples_per_tau must be >= 2");
  if (cutoff < 1) bad("cutoff must be >= 1");
  if (!(rtol > 0) || !(atol > 0) || !(max_step_tau > 0)) bad("tolerances must be positive");
  if (tong_horizons < 0 || resample_attempts < 0) bad("negative count");
  if (!(bloch_window_tau > 0) || !(steady_window_tau > 0)) bad("windows must be positive");
  for (const auto& o : outputs)
    if (!all_outputs().count(o)) bad("unknown output '" + o + "'");
  try {
    system().validate();
    baths.validate();
  } catch (const InvalidArgument& e) {
    bad(e.what());
  }
  if (!initial.amplitudes.empty()) {
    double n2 = 0;
    for (auto a : initial.amplitudes) n2 += std::norm(a);
    if (std::abs(n2 - 1.0) > 1e-10) bad("initial amplitudes not normalized");
  } else if (initial.label.empty()) {
    bad("initial state missing");
  }
}

namespace {

std::pair<int, int> parse_label(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (c != '|' && c != '>' && c != ' ' && c != '<') s += c;
  auto num = [&](const std::string& x) {
    if (x.empty() || !std::all_of(x.begin(), x.end(), ::isdigit))
      throw ConfigError("bad basis label '" + raw + "'");
    return std::stoi(x);
  };
  if (auto k = s.find(','); k != std::string::npos)
    return {num(s.substr(0, k)), num(s.substr(k + 1))};
  if (s.size() != 2) throw ConfigError("bad basis label '" + raw + "'");
  return {num(s.substr(0, 1)), num(s.substr(1, 1))};
}

int max_excitation(const ScenarioConfig& cfg) {
  if (cfg.initial.amplitudes.empty()) {
    auto [m, n] = parse_label(cfg.initial.label);
    return m + n;
  }
  const auto b = basis_for_dim(cfg.initial.amplitudes.size());
  int k = 0;
  for (std::size_t i = 0; i < b.dim(); ++i)
    if (std::abs(cfg.initial.amplitudes[i]) > 0) k = std::max(k, b.states[i].excitations());
  return k;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

double default_t_end(const ScenarioConfig& cfg) {
  return (max_excitation(cfg) >= 2 || std::abs(cfg.delta) < 0.01) ? 40.0 : 20.0;
}

ScenarioConfig ScenarioConfig::resolved() const {
  ScenarioConfig c = *this;
  if (c.t_end_auto) {
    c.t_end = default_t_end(c);
    c.t_end_auto = false;
  }
  if (c.outputs.empty()) c.outputs = all_outputs();
  return c;
}

Vec initial_vector(const ScenarioConfig& cfg, const TruncatedBasis& basis) {
  const auto d = static_cast<Eigen::Index>(basis.dim());
  if (cfg.initial.amplitudes.empty()) {
    auto [m, n] = parse_label(cfg.initial.label);
    if (basis.index_of(m, n) < 0)
      throw ConfigError(cfg.name + ": initial state outside the truncation");
    return basis_vector(basis, m, n);
  }
  if (static_cast<Eigen::Index>(cfg.initial.amplitudes.size()) != d)
    throw ConfigError(cfg.name + ": amplitude count does not match the basis");
  Vec v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = cfg.initial.amplitudes[static_cast<std::size_t>(i)];
  return v;
}

void SweepConfig::validate() const {
  static const std::set<std::string> axes{"delta", "E_c", "kappa", "gamma", "gamma_phi", "g"};
  if (!axes.count(axis)) throw InvalidArgument("unknown sweep axis '" + axis + "'");
  if (values.empty()) throw InvalidArgument("sweep values are empty");
}

ScenarioConfig with_axis_value(const ScenarioConfig& base, const std::string& axis,
                               double value) {
  ScenarioConfig c = base;
  if (axis == "delta") c.delta = value;
  else if (axis == "E_c") c.E_c = value;
  else if (axis == "kappa") c.baths.kappa = value;
  else if (axis == "gamma") c.baths.gamma = value;
  else if (axis == "gamma_phi") c.baths.gamma_phi = value;
  else if (axis == "g") c.g = value;
  else throw InvalidArgument("unknown sweep axis '" + axis + "'");
  c.name = base.name + "_" + axis + "=" + fmt(value);
  return c;
}

std::vector<double> ResultBundle::t_over_tau() const {
  std::vector<double> t(traj.times.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = traj.times[i] / rabi.tau;
  return t;
}

namespace {

ResultBundle run_impl(const ScenarioConfig& in) {
  const ScenarioConfig cfg = in.resolved();
  cfg.validate();
  ResultBundle out;
  out.config = cfg;
  const TruncatedBasis basis = build_basis(cfg.cutoff);
  const SystemParams sys = cfg.system();
  out.rabi = rabi_frequency(sys.delta(), sys.g);
  const double tau = out.rabi.tau;
  const Vec psi0 = initial_vector(cfg, basis);
  const Mat rho0 = psi0 * psi0.adjoint();
  const LindbladModel model(sys, cfg.baths, cfg.dephasing, basis);

  AccuracyConfig tol;
  tol.rtol = cfg.rtol;
  tol.atol = cfg.atol;
  tol.max_step = cfg.max_step_tau * tau;

  long spt = cfg.samples_per_tau;
  for (int attempt = 0;; ++attempt) {
    TimeGrid grid{0.0, cfg.t_end * tau,
                  static_cast<std::size_t>(std::llround(cfg.t_end * static_cast<double>(spt))) + 1};
    out.traj = evolve(rho0, model, grid, tol);
    out.traj.sys = sys;
    std::vector<EigenSnapshot> snaps;
    snaps.reserve(out.traj.size());
    for (const auto& r : out.traj.states) snaps.push_back(eig_hermitian(r));
    try {
      out.tracking = track_branches(snaps, psi0);
      GpConfig gc;
      gc.quadrature = cfg.quadrature;
      gc.settle_tol = cfg.settle_tol;
      gc.settle_hold = cfg.settle_hold_tau;
      out.gp = gp_pure_branch(out.tracking.branches[*out.tracking.distinguished],
                              out.t_over_tau(), gc);
      break;
    } catch (const BranchAmbiguity&) {
      if (attempt >= cfg.resample_attempts) throw;
    } catch (const ResolutionError&) {
      if (attempt >= cfg.resample_attempts) throw;
    }
    spt *= 2;
    ++out.resamples;
  }

  out.cls = classify_monotonicity(out.gp, cfg.classify);
  const auto tt = out.t_over_tau();
  const auto& plus = out.tracking.branches[*out.tracking.distinguished];

  // Bloch path only while psi_+ stays in the one-excitation block
  try {
    out.bloch.reserve(plus.vectors.size());
    for (std::size_t i = 0; i < plus.vectors.size(); ++i)
      out.bloch.push_back(bloch_of_branch(plus.vectors[i], tt[i]));
  } catch (const NotInBlock&) {
    out.bloch.clear();
  }
  if (!out.bloch.empty()) {
    const auto w = static_cast<std::size_t>(std::llround(cfg.bloch_window_tau * static_cast<double>(spt)));
    out.events.spiral_crossings = spiral_axis_crossings(out.bloch, w);
    out.events.antipode_crossings = antipode_crossings(out.bloch, w);
  }
  if (basis.dim() >= 3) {
    const auto e12 = element_series(out.traj, 1, 2);
    std::vector<double> mag(e12.values.size());
    for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = std::abs(e12.values[i]);
    out.events.rho12_min = interior_minimum(tt, mag);
  }
  if (cfg.steady_window_tau < cfg.t_end)
    out.events.steady = steady_reached(out.traj, cfg.steady_window_tau * tau, cfg.steady_eps);

  const std::size_t N = out.traj.size();
  for (int h = 1; h <= cfg.tong_horizons; ++h) {
    const std::size_t idx = (N - 1) * static_cast<std::size_t>(h) /
                            static_cast<std::size_t>(cfg.tong_horizons);
    out.tong.push_back({idx, tt[idx], gp_tong_mixed(out.tracking.branches, idx, cfg.quadrature)});
  }
  return out;
}

}  // namespace

ResultBundle run_scenario(const ScenarioConfig& cfg) {
  const std::string pre = cfg.name + ": ";
  try {
    return run_impl(cfg);
  } catch (const ConfigError&) {
    throw;
  } catch (const IntegrationFailure& e) {
    throw IntegrationFailure(pre + e.what(), e.t_reached);
  } catch (const StateValidityError& e) {
    throw StateValidityError(pre + e.what(), e.t);
  } catch (const BranchAmbiguity& e) {
    throw BranchAmbiguity(pre + e.what(), e.sample, e.gap);
  } catch (const ResolutionError& e) {
    throw ResolutionError(pre + e.what(), e.sample);
  } catch (const InvalidInitialState& e) {
    throw InvalidInitialState(pre + e.what());
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(pre + e.what());
  }
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const InvalidArgument*>(&e)) return 2;
  if (dynamic_cast<const IntegrationFailure*>(&e) || dynamic_cast<const StateValidityError*>(&e))
    return 3;
  if (dynamic_cast<const BranchAmbiguity*>(&e)) return 4;
  return 1;
}

SweepResult run_sweep(const SweepConfig& cfg, unsigned workers) {
  cfg.validate();
  SweepResult r;
  r.config = cfg;
  const std::size_t n = cfg.values.size();
  r.bundles.resize(n);
  r.summary.resize(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < n;) {
      SweepRow row;
      row.value = cfg.values[i];
      try {
        ResultBundle b = run_scenario(with_axis_value(cfg.base, cfg.axis, cfg.values[i]));
        row.ok = true;
        row.kind = to_string(b.cls.kind);
        row.n_events = b.cls.event_times.size();
        if (!b.cls.event_times.empty()) row.first_event = b.cls.event_times.front();
        row.settled = b.gp.settled;
        row.settle_time = b.gp.settle_time;
        row.final_phi = b.gp.phi_g.back();
        r.bundles[i] = std::move(b);
      } catch (const std::exception& e) {
        row.error = e.what();
        row.exit_code = exit_code_for(e);
      }
      r.summary[i] = std::move(row);
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return r;
}

// ---- JSON

json to_json(const ScenarioConfig& c) {
  json j;
  j["name"] = c.name;
  j["system"] = {{"omega_q", c.omega_q}, {"delta", c.delta}, {"g", c.g}, {"E_c", c.E_c}};
  j["baths"] = {{"kappa", c.baths.kappa}, {"gamma", c.baths.gamma},
                {"gamma_phi", c.baths.gamma_phi}};
  j["dephasing_op"] = to_string(c.dephasing);
  if (c.initial.amplitudes.empty()) {
    j["initial_state"] = c.initial.label;
  } else {
    json a = json::array();
    for (auto z : c.initial.amplitudes) a.push_back({z.real(), z.imag()});
    j["initial_state"] = a;
  }
  if (c.t_end_auto) j["t_end"] = "auto";
  else j["t_end"] = c.t_end;
  j["samples_per_tau"] = c.samples_per_tau;
  j["outputs"] = c.outputs;
  j["cutoff"] = c.cutoff;
  j["accuracy"] = {{"rtol", c.rtol}, {"atol", c.atol}, {"max_step_tau", c.max_step_tau}};
  j["quadrature"] = to_string(c.quadrature);
  j["classification"] = {{"reversal_threshold", c.classify.reversal_threshold},
                         {"noise_window", c.classify.noise_window}};
  j["settle"] = {{"tol", c.settle_tol}, {"hold_tau", c.settle_hold_tau}};
  j["steady"] = {{"window_tau", c.steady_window_tau}, {"eps", c.steady_eps}};
  j["bloch_window_tau"] = c.bloch_window_tau;
  j["tong_horizons"] = c.tong_horizons;
  j["resample_attempts"] = c.resample_attempts;
  return j;
}

namespace {

template <class T>
void get_opt(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

ScenarioConfig scenario_from_json(const json& j) {
  ScenarioConfig c;
  try {
    if (!j.is_object()) throw ConfigError("scenario must be a JSON object");
    static const std::set<std::string> keys{
        "name", "system", "baths", "dephasing_op", "initial_state", "t_end",
        "samples_per_tau", "outputs", "cutoff", "accuracy", "quadrature",
        "classification", "settle", "steady", "bloch_window_tau",
        "tong_horizons", "resample_attempts"};
    for (auto it = j.begin(); it != j.end(); ++it)
      if (!keys.count(it.key())) throw ConfigError("unknown key '" + it.key() + "'");
    get_opt(j, "name", c.name);
    if (j.contains("system")) {
      const auto& s = j.at("system");
      get_opt(s, "omega_q", c.omega_q);
      get_opt(s, "delta", c.delta);
      get_opt(s, "g", c.g);
      get_opt(s, "E_c", c.E_c);
    }
    if (j.contains("baths")) {
      const auto& b = j.at("baths");
      get_opt(b, "kappa", c.baths.kappa);
      get_opt(b, "gamma", c.baths.gamma);
      get_opt(b, "gamma_phi", c.baths.gamma_phi);
    }
    if (j.contains("dephasing_op"))
      c.dephasing = dephasing_from_string(j.at("dephasing_op").get<std::string>());
    if (j.contains("initial_state")) {
      const auto& s = j.at("initial_state");
      if (s.is_string()) {
        c.initial = {s.get<std::string>(), {}};
      } else {
        c.initial.label.clear();
        for (const auto& z : s) {
          if (z.is_number()) c.initial.amplitudes.emplace_back(z.get<double>(), 0.0);
          else c.initial.amplitudes.emplace_back(z.at(0).get<double>(), z.at(1).get<double>());
        }
      }
    }
    if (j.contains("t_end")) {
      const auto& t = j.at("t_end");
      if (t.is_string()) {
        if (t.get<std::string>() != "auto") throw ConfigError("t_end must be a number or \"auto\"");
        c.t_end_auto = true;
      } else {
        c.t_end = t.get<double>();
        c.t_end_auto = false;
      }
    }
    get_opt(j, "samples_per_tau", c.samples_per_tau);
    if (j.contains("outputs")) c.outputs = j.at("outputs").get<std::set<std::string>>();
    get_opt(j, "cutoff", c.cutoff);
    if (j.contains("accuracy")) {
      const auto& a = j.at("accuracy");
      get_opt(a, "rtol", c.rtol);
      get_opt(a, "atol", c.atol);
      get_opt(a, "max_step_tau", c.max_step_tau);
    }
    if (j.contains("quadrature"))
      c.quadrature = quadrature_from_string(j.at("quadrature").get<std::string>());
    if (j.contains("classification")) {
      const auto& k = j.at("classification");
      get_opt(k, "reversal_threshold", c.classify.reversal_threshold);
      get_opt(k, "noise_window", c.classify.noise_window);
    }
    if (j.contains("settle")) {
      get_opt(j.at("settle"), "tol", c.settle_tol);
      get_opt(j.at("settle"), "hold_tau", c.settle_hold_tau);
    }
    if (j.contains("steady")) {
      get_opt(j.at("steady"), "window_tau", c.steady_window_tau);
      get_opt(j.at("steady"), "eps", c.steady_eps);
    }
    get_opt(j, "bloch_window_tau", c.bloch_window_tau);
    get_opt(j, "tong_horizons", c.tong_horizons);
    get_opt(j, "resample_attempts", c.resample_attempts);
    if (c.t_end_auto) c.t_end = default_t_end(c);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

json to_json(const SweepConfig& s) {
  return {{"name", s.name}, {"base", to_json(s.base)}, {"axis", s.axis}, {"values", s.values}};
}

SweepConfig sweep_from_json(const json& j) {
  SweepConfig s;
  try {
    if (!j.contains("axis") || !j.contains("values") || !j.contains("base"))
      throw ConfigError("sweep needs base, axis and values");
    get_opt(j, "name", s.name);
    const auto& b = j.at("base");
    if (b.is_string()) {
      const Preset& p = find_preset(b.get<std::string>());
      s.base = p.base;
    } else {
      s.base = scenario_from_json(b);
    }
    s.axis = j.at("axis").get<std::string>();
    s.values = j.at("values").get<std::vector<double>>();
    if (s.name.empty()) s.name = s.base.name;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("sweep config: ") + e.what());
  }
  return s;
}

json load_json(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw ConfigError("cannot open config " + p.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(p.string() + ": " + e.what());
  }
}

}  // namespace tgp
