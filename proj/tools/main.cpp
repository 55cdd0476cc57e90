#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "tgp/errors.hpp"
#include "tgp/scenario.hpp"

namespace {

struct Overrides {
  std::optional<int> samples_per_tau;
  std::optional<double> tol;
  std::optional<std::string> dephasing;
};

void apply(tgp::ScenarioConfig& c, const Overrides& o) {
  if (o.samples_per_tau) c.samples_per_tau = *o.samples_per_tau;
  if (o.tol) c.rtol = *o.tol;
  if (o.dephasing) c.dephasing = tgp::dephasing_from_string(*o.dephasing);
}

void print_bundle(const tgp::ResultBundle& b) {
  std::printf("%-28s %-13s reversals=%zu final_phi=%.9f settled=%s steady=%s\n",
              b.config.name.c_str(), tgp::to_string(b.cls.kind).c_str(),
              b.cls.event_times.size(), b.gp.phi_g.back(), b.gp.settled ? "yes" : "no",
              b.events.steady ? "yes" : "no");
}

int do_sweep(tgp::SweepConfig s, const Overrides& o, const std::string& out, tgp::Format f,
             unsigned workers) {
  apply(s.base, o);
  const auto r = tgp::run_sweep(s, workers);
  int code = 0;
  // single collector writes everything after the workers finish
  for (std::size_t i = 0; i < r.bundles.size(); ++i) {
    if (r.bundles[i]) {
      tgp::emit(*r.bundles[i], f, out);
      print_bundle(*r.bundles[i]);
    } else {
      std::fprintf(stderr, "error: %s\n", r.summary[i].error.c_str());
      if (!code) code = r.summary[i].exit_code;
    }
  }
  tgp::emit_summary(r, f, out);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"transmon-resonator Lindblad dynamics and eigenstate geometric phase"};
  app.require_subcommand(1);
  std::string out = "out";
  std::string format = "csv";
  Overrides ov;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());

  auto common = [&](CLI::App* sc) {
    sc->add_option("--out", out, "output directory")->capture_default_str();
    sc->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sc->add_option("--samples-per-tau", ov.samples_per_tau, "samples per Rabi period");
    sc->add_option("--tol", ov.tol, "relative integrator tolerance");
    sc->add_option("--dephasing-op", ov.dephasing, "number or literal")
        ->check(CLI::IsMember({"number", "literal"}));
    sc->add_option("--workers", workers, "concurrent sweep points")->capture_default_str();
  };

  std::string target;
  auto* run = app.add_subcommand("run", "run a preset or a scenario config file");
  run->add_option("target", target, "preset name or config path")->required();
  common(run);
  std::string sweep_path;
  auto* sweep = app.add_subcommand("sweep", "run a sweep config file or a preset family");
  sweep->add_option("config", sweep_path, "sweep config path or family preset")->required();
  common(sweep);
  auto* list = app.add_subcommand("list-presets", "list preset names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const tgp::Format f = tgp::format_from_string(format);
    if (list->parsed()) {
      for (const auto& p : tgp::presets())
        std::printf("%-24s %s%s\n", p.name.c_str(), p.sweep ? "[family] " : "",
                    p.description.c_str());
      return 0;
    }
    auto resolve = [&](const std::string& t) -> std::pair<std::optional<tgp::ScenarioConfig>,
                                                          std::optional<tgp::SweepConfig>> {
      if (std::filesystem::exists(t)) {
        const auto j = tgp::load_json(t);
        if (j.contains("axis")) return {std::nullopt, tgp::sweep_from_json(j)};
        return {tgp::scenario_from_json(j), std::nullopt};
      }
      const auto& p = tgp::find_preset(t);
      if (p.sweep) return {std::nullopt, *p.sweep};
      return {p.base, std::nullopt};
    };
    auto [sc, sw] = resolve(run->parsed() ? target : sweep_path);
    if (sw) return do_sweep(*sw, ov, out, f, workers);
    if (sweep->parsed()) throw tgp::ConfigError(sweep_path + " is not a sweep");
    apply(*sc, ov);
    const auto b = tgp::run_scenario(*sc);
    tgp::emit(b, f, out);
    print_bundle(b);
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return tgp::exit_code_for(e);
  }
}
