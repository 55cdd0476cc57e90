#include <algorithm>
#include <cstdio>

#include "tgp/errors.hpp"
#include "tgp/scenario.hpp"

namespace tgp {

namespace {

ScenarioConfig make(const std::string& name, const std::string& state, double delta,
                    double kappa, double gamma, double E_c) {
  ScenarioConfig c;
  c.name = name;
  c.delta = delta;
  c.g = 0.028;
  c.E_c = E_c;
  c.baths = {kappa, gamma, 0.0};
  c.initial = {state, {}};
  c.t_end = default_t_end(c);
  return c;
}

void add_family(std::vector<Preset>& out, const std::string& name, const std::string& desc,
                ScenarioConfig base, const std::string& axis, std::vector<double> values) {
  base.t_end_auto = true;
  SweepConfig s{name, base, axis, values};
  out.push_back({name, desc, base, s});
  for (double v : values) {
    ScenarioConfig m = with_axis_value(base, axis, v);
    m.t_end = default_t_end(m);
    m.t_end_auto = false;
    char buf[32];
    std::snprintf(buf, sizeof buf, ", %s %g", axis.c_str(), v);
    out.push_back({m.name, desc + buf, m, {}});
  }
}

std::vector<Preset> build() {
  std::vector<Preset> p;
  const double k = 0.005, gm = 0.005;
  p.push_back({"fig2", "populations and coherences, |01>, kappa, delta 0.017",
               make("fig2", "|01>", 0.017, k, 0, 0), {}});
  p.push_back({"fig3a", "Bloch path, |01>, kappa, delta 0.0017",
               make("fig3a", "|01>", 0.0017, k, 0, 0), {}});
  p.push_back({"fig3b", "Bloch path, |01>, kappa, delta 0.017",
               make("fig3b", "|01>", 0.017, k, 0, 0), {}});
  p.push_back({"fig3c", "Bloch path, |01>, kappa, delta 0.17",
               make("fig3c", "|01>", 0.17, k, 0, 0), {}});
  p.push_back({"fig4", "GP and Bloch path, |01>, kappa, delta 0.017",
               make("fig4", "|01>", 0.017, k, 0, 0), {}});
  const std::vector<double> d3{0.0017, 0.017, 0.034};
  add_family(p, "fig5a", "GP vs detuning, |10>, kappa", make("fig5a", "|10>", 0, k, 0, 0), "delta", d3);
  add_family(p, "fig5b", "GP vs detuning, |01>, kappa", make("fig5b", "|01>", 0, k, 0, 0), "delta", d3);
  add_family(p, "fig6a", "GP vs detuning, |10>, gamma", make("fig6a", "|10>", 0, 0, gm, 0), "delta", d3);
  add_family(p, "fig6b", "GP vs detuning, |01>, gamma", make("fig6b", "|01>", 0, 0, gm, 0), "delta", d3);
  p.push_back({"fig7", "GP and Bloch path, |10>, gamma, delta 0.017",
               make("fig7", "|10>", 0.017, 0, gm, 0), {}});
  p.push_back({"fig8", "two-excitation dynamics, |11>, kappa, delta 0.0017, E_c 0.035",
               make("fig8", "|11>", 0.0017, k, 0, 0.035), {}});
  const std::vector<double> d4{0.0017, 0.013, 0.015, 0.017};
  add_family(p, "fig9a", "GP vs detuning, |11>, gamma, E_c 0.035",
             make("fig9a", "|11>", 0, 0, gm, 0.035), "delta", d4);
  add_family(p, "fig9b", "GP vs detuning, |11>, kappa, E_c 0.035",
             make("fig9b", "|11>", 0, k, 0, 0.035), "delta", d4);
  add_family(p, "fig10a", "GP vs detuning, |11>, kappa, E_c 0.003",
             make("fig10a", "|11>", 0, k, 0, 0.003), "delta", d4);
  add_family(p, "fig10b", "GP vs anharmonicity, |11>, kappa, delta 0.0017",
             make("fig10b", "|11>", 0.0017, k, 0, 0), "E_c", {0.003, 0.035, 0.067});
  return p;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> p = build();
  return p;
}

const Preset& find_preset(const std::string& name) {
  const auto& p = presets();
  auto it = std::find_if(p.begin(), p.end(), [&](const Preset& x) { return x.name == name; });
  if (it == p.end()) throw ConfigError("unknown preset '" + name + "'");
  return *it;
}

}  // namespace tgp
