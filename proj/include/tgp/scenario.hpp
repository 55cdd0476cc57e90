#pragma once
#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "tgp/analysis_bloch.hpp"
#include "tgp/dynamics_model.hpp"
#include "tgp/geometric_phase.hpp"
#include "tgp/propagator.hpp"
#include "tgp/spectral_tracking.hpp"

namespace tgp {

inline constexpr const char* kVersion = "1.0.0";

// either a basis label such as "|01>" (transmon level, photon number)
// or explicit amplitudes in canonical basis order
struct InitialState {
  bool operator==(const InitialState&) const = default;
  std::string label;
  std::vector<cplx> amplitudes;
};

struct ScenarioConfig {
  std::string name = "scenario";
  // ratios to omega_q; omega_r = omega_q - delta
  double omega_q = 1.0;
  double delta = 0.0;
  double g = 0.0;
  double E_c = 0.0;
  BathParams baths;
  DephasingOp dephasing = DephasingOp::number;
  InitialState initial{"|01>", {}};
  double t_end = 20.0;  // multiples of tau
  // pick t_end from the state and detuning when resolving
  bool t_end_auto = false;
  int samples_per_tau = 200;
  std::set<std::string> outputs;
  int cutoff = 2;

  double rtol = 1e-9;
  double atol = 1e-12;
  double max_step_tau = 1.0 / 50.0;
  Quadrature quadrature = Quadrature::richardson6;
  MonotonicityConfig classify;
  double settle_tol = 1e-4;
  double settle_hold_tau = 2.0;
  double steady_window_tau = 2.0;
  double steady_eps = 1e-3;
  double bloch_window_tau = 1.0;
  int tong_horizons = 10;
  int resample_attempts = 3;

  bool operator==(const ScenarioConfig&) const = default;
  SystemParams system() const;
  void validate() const;
  // copy with t_end_auto applied
  ScenarioConfig resolved() const;
};

// 40 tau for two-excitation or small-detuning runs, 20 tau otherwise
double default_t_end(const ScenarioConfig& cfg);

const std::set<std::string>& all_outputs();

struct SweepConfig {
  std::string name;
  ScenarioConfig base;
  std::string axis;
  std::vector<double> values;
  void validate() const;
};

ScenarioConfig with_axis_value(const ScenarioConfig& base,
                               const std::string& axis, double value);

struct TongSample {
  std::size_t index;
  double t_over_tau;
  TongPhaseResult result;
};

struct Events {
  std::optional<Extremum> rho12_min;  // |rho_12| interior minimum
  std::vector<double> spiral_crossings;
  std::vector<double> antipode_crossings;
  bool steady = false;
};

struct ResultBundle {
  ScenarioConfig config;
  Rabi rabi{};
  Trajectory traj;
  TrackingResult tracking;
  GeometricPhaseSeries gp;  // times in units of tau
  Classification cls;       // times in units of tau
  std::vector<BlochPoint> bloch;  // empty unless psi_+ stays in the 2x2 block
  std::vector<TongSample> tong;
  Events events;            // times in units of tau
  int resamples = 0;

  std::vector<double> t_over_tau() const;
};

Vec initial_vector(const ScenarioConfig& cfg, const TruncatedBasis& basis);

ResultBundle run_scenario(const ScenarioConfig& cfg);

struct SweepRow {
  double value;
  bool ok = false;
  std::string error;
  int exit_code = 0;  // CLI code of the failure, 0 when ok
  std::string kind;
  std::size_t n_events = 0;
  std::optional<double> first_event;
  bool settled = false;
  double settle_time = 0;
  double final_phi = 0;
};

struct SweepResult {
  SweepConfig config;
  std::vector<std::optional<ResultBundle>> bundles;
  std::vector<SweepRow> summary;
};

SweepResult run_sweep(const SweepConfig& cfg, unsigned workers = 1);

// 2 config/argument, 3 integration or state validity, 4 branch ambiguity, 1 other
int exit_code_for(const std::exception& e);

// presets
struct Preset {
  std::string name;
  std::string description;
  ScenarioConfig base;
  std::optional<SweepConfig> sweep;
};

const std::vector<Preset>& presets();
const Preset& find_preset(const std::string& name);

// JSON (de)serialization of configurations
nlohmann::json to_json(const ScenarioConfig& cfg);
ScenarioConfig scenario_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SweepConfig& cfg);
SweepConfig sweep_from_json(const nlohmann::json& j);
// file holding either a scenario or a sweep ("axis" key present)
nlohmann::json load_json(const std::filesystem::path& p);

enum class Format { csv, json };
Format format_from_string(const std::string& s);

// writes one file per requested output (csv) or one document (json);
// returns the paths written
std::vector<std::filesystem::path> emit(const ResultBundle& b, Format f,
                                        const std::filesystem::path& dir);
std::filesystem::path emit_summary(const SweepResult& r, Format f,
                                   const std::filesystem::path& dir);

}  // namespace tgp
