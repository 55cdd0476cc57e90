#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tgp/errors.hpp"
#include "tgp/scenario.hpp"

namespace tgp {

using nlohmann::json;
namespace fs = std::filesystem;

Format format_from_string(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw ConfigError("unknown format '" + s + "'");
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string rho_label(std::size_t i, std::size_t j) {
  return "rho_" + std::to_string(i) + std::to_string(j);
}

// pairs i<j inside one excitation block
std::vector<std::pair<std::size_t, std::size_t>> coherence_pairs(const TruncatedBasis& b) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < b.dim(); ++i)
    for (std::size_t j = i + 1; j < b.dim(); ++j)
      if (b.states[i].excitations() == b.states[j].excitations()) out.emplace_back(i, j);
  return out;
}

json metadata(const ResultBundle& b) {
  const auto& c = b.config;
  json m;
  m["tool"] = "tgp";
  m["version"] = kVersion;
  m["config"] = to_json(c);
  m["units"] = {{"frequency", "omega_q"},
                {"time", "tau = 2 pi / Omega"},
                {"phase", "rad"},
                {"bloch_convention", "|10> north, |01> south, x = 2 Re(a* b), y = 2 Im(a* b)"}};
  m["si_display"] = {{"omega_q", "2 pi x 6 GHz"}, {"g", "2 pi x 166.85 MHz"},
                     {"kappa", "2 pi x 30 MHz"}};
  m["tolerances"] = {{"rtol", c.rtol}, {"atol", c.atol}, {"max_step_tau", c.max_step_tau}};
  m["rabi"] = {{"Omega", b.rabi.Omega}, {"tau", b.rabi.tau}};
  m["samples_per_tau_used"] = c.samples_per_tau << b.resamples;
  m["resamples"] = b.resamples;
  m["integrator"] = {{"method", "dopri5 dense output"},
                     {"steps_accepted", b.traj.steps_accepted},
                     {"steps_rejected", b.traj.steps_rejected},
                     {"max_trace_error", b.traj.worst.trace_err},
                     {"max_offblock_norm", b.traj.worst.offblock},
                     {"min_eigenvalue", b.traj.worst.min_eig}};
  json basis = json::array();
  for (const auto& s : b.traj.basis.states) basis.push_back(s.label());
  m["basis"] = basis;
  m["classification"] = to_string(b.cls.kind);
  m["settled"] = b.gp.settled;
  m["settle_time_tau"] = b.gp.settle_time;
  m["steady"] = b.events.steady;
  m["bloch_path_available"] = !b.bloch.empty();
  return m;
}

struct Table {
  std::vector<std::string> cols;
  std::vector<std::vector<double>> data;  // column-major
};

Table table_for(const ResultBundle& b, const std::string& what) {
  Table t;
  const auto tt = b.t_over_tau();
  const std::size_t d = b.traj.basis.dim();
  if (what == "populations") {
    t.cols.push_back("t_over_tau");
    t.data.push_back(tt);
    for (std::size_t i = 0; i < d; ++i) {
      t.cols.push_back(rho_label(i, i));
      std::vector<double> v;
      for (const auto& r : b.traj.states)
        v.push_back(r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real());
      t.data.push_back(std::move(v));
    }
  } else if (what == "coherences") {
    t.cols.push_back("t_over_tau");
    t.data.push_back(tt);
    for (auto [i, j] : coherence_pairs(b.traj.basis)) {
      std::vector<double> re, im, ab;
      for (const auto& r : b.traj.states) {
        const cplx z = r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        re.push_back(z.real());
        im.push_back(z.imag());
        ab.push_back(std::abs(z));
      }
      const std::string l = rho_label(i, j);
      t.cols.insert(t.cols.end(), {l + "_re", l + "_im", l + "_abs"});
      t.data.push_back(std::move(re));
      t.data.push_back(std::move(im));
      t.data.push_back(std::move(ab));
    }
  } else if (what == "bloch_path") {
    t.cols = {"t_over_tau", "x", "y", "z"};
    t.data.resize(4);
    for (const auto& p : b.bloch) {
      t.data[0].push_back(p.t);
      t.data[1].push_back(p.x);
      t.data[2].push_back(p.y);
      t.data[3].push_back(p.z);
    }
  } else if (what == "gp_series") {
    t.cols = {"t_over_tau", "phi_g_rad"};
    t.data = {b.gp.times, b.gp.phi_g};
  } else if (what == "tong_phase") {
    t.cols = {"t_over_tau", "phi_g_rad"};
    t.data.resize(2);
    for (const auto& s : b.tong) {
      t.data[0].push_back(s.t_over_tau);
      t.data[1].push_back(s.result.phi_g);
    }
  }
  return t;
}

struct Event {
  std::string kind;
  double t;
  double value;
};

std::vector<Event> events_of(const ResultBundle& b) {
  std::vector<Event> ev;
  auto phi_at = [&](double t) {
    const auto& ts = b.gp.times;
    auto it = std::lower_bound(ts.begin(), ts.end(), t);
    if (it == ts.end()) return b.gp.phi_g.back();
    return b.gp.phi_g[static_cast<std::size_t>(it - ts.begin())];
  };
  for (std::size_t k = 0; k < b.cls.event_times.size(); ++k)
    ev.push_back({"gp_reversal", b.cls.event_times[k], b.gp.phi_g[b.cls.event_samples[k]]});
  for (double t : b.gp.sign_change_times) ev.push_back({"gp_increment_sign_change", t, phi_at(t)});
  if (b.events.rho12_min)
    ev.push_back({"rho12_interior_min", b.events.rho12_min->t, b.events.rho12_min->value});
  for (double t : b.events.spiral_crossings) ev.push_back({"spiral_axis_crossing", t, 0.0});
  for (double t : b.events.antipode_crossings) ev.push_back({"antipode_crossing", t, 0.0});
  if (b.gp.settled) ev.push_back({"gp_settled", b.gp.settle_time, b.gp.phi_g.back()});
  return ev;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + p.string());
  out << text;
  if (!out) throw IoError("write failed for " + p.string());
}

std::string csv(const Table& t) {
  std::ostringstream os;
  for (std::size_t c = 0; c < t.cols.size(); ++c) os << (c ? "," : "") << t.cols[c];
  os << "\n";
  const std::size_t n = t.data.empty() ? 0 : t.data[0].size();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < t.data.size(); ++c) os << (c ? "," : "") << num(t.data[c][r]);
    os << "\n";
  }
  return os.str();
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

}  // namespace

std::vector<fs::path> emit(const ResultBundle& b, Format f, const fs::path& dir) {
  ensure_dir(dir);
  std::vector<fs::path> written;
  const auto& outs = b.config.outputs.empty() ? all_outputs() : b.config.outputs;
  const std::string stem = b.config.name;
  if (f == Format::csv) {
    for (const auto& o : outs) {
      if (o == "bloch_path" && b.bloch.empty()) continue;
      const fs::path p = dir / (stem + "_" + o + ".csv");
      if (o == "events") {
        std::ostringstream os;
        os << "kind,t_over_tau,value\n";
        for (const auto& e : events_of(b)) os << e.kind << "," << num(e.t) << "," << num(e.value) << "\n";
        write_file(p, os.str());
      } else {
        write_file(p, csv(table_for(b, o)));
      }
      written.push_back(p);
    }
    const fs::path p = dir / (stem + "_meta.json");
    write_file(p, metadata(b).dump(2) + "\n");
    written.push_back(p);
    return written;
  }
  json doc;
  doc["metadata"] = metadata(b);
  for (const auto& o : outs) {
    if (o == "bloch_path" && b.bloch.empty()) continue;
    if (o == "events") {
      json e = json::array();
      for (const auto& x : events_of(b)) e.push_back({{"kind", x.kind}, {"t_over_tau", x.t}, {"value", x.value}});
      doc["events"] = e;
      continue;
    }
    const Table t = table_for(b, o);
    json cols;
    for (std::size_t c = 0; c < t.cols.size(); ++c) cols[t.cols[c]] = t.data[c];
    doc[o] = cols;
  }
  const fs::path p = dir / (stem + ".json");
  write_file(p, doc.dump(1) + "\n");
  written.push_back(p);
  return written;
}

fs::path emit_summary(const SweepResult& r, Format f, const fs::path& dir) {
  ensure_dir(dir);
  const std::string stem = r.config.name + "_summary";
  if (f == Format::csv) {
    std::ostringstream os;
    os << r.config.axis
       << ",ok,classification,n_events,first_event_tau,settled,settle_time_tau,final_phi_rad,error\n";
    for (const auto& s : r.summary) {
      std::string err = s.error;
      for (auto& ch : err)
        if (ch == ',' || ch == '\n') ch = ';';
      os << num(s.value) << "," << (s.ok ? 1 : 0) << "," << s.kind << "," << s.n_events << ","
         << (s.first_event ? num(*s.first_event) : "") << "," << (s.settled ? 1 : 0) << ","
         << num(s.settle_time) << "," << num(s.final_phi) << "," << err << "\n";
    }
    const fs::path p = dir / (stem + ".csv");
    write_file(p, os.str());
    return p;
  }
  json rows = json::array();
  for (const auto& s : r.summary) {
    json x = {{"value", s.value}, {"ok", s.ok}, {"classification", s.kind},
              {"n_events", s.n_events}, {"settled", s.settled},
              {"settle_time_tau", s.settle_time}, {"final_phi_rad", s.final_phi}};
    x["first_event_tau"] = s.first_event ? json(*s.first_event) : json(nullptr);
    if (!s.error.empty()) x["error"] = s.error;
    rows.push_back(x);
  }
  json doc = {{"metadata", {{"tool", "tgp"}, {"version", kVersion}, {"sweep", to_json(r.config)}}},
              {"summary", rows}};
  const fs::path p = dir / (stem + ".json");
  write_file(p, doc.dump(2) + "\n");
  return p;
}

}  // namespace tgp
