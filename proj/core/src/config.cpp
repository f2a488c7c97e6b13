#include "chiralwg/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "chiralwg/errors.hpp"

namespace chiralwg {

namespace {

using json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// Scalar with optional `abs` suffix; rates default to gamma_ph units,
// times to 1/gamma_ph units.
enum class Kind { Plain, Rate, Time, Int, Bool, Str, Grid, Enum };

struct KeySpec {
  std::string section, key;
  Kind kind;
  std::function<void(RunConfig&, const std::string&, bool)> apply;  // (cfg, value, absolute)
};

double parse_double(const std::string& section, const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (trim(v.substr(pos)) != "") throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw_config("bad numeric value '" + v + "' for key '" + key + "' in [" + section + "]");
  }
}

int parse_int(const std::string& section, const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const int x = std::stoi(v, &pos);
    if (trim(v.substr(pos)) != "") throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw_config("bad integer value '" + v + "' for key '" + key + "' in [" + section + "]");
  }
}

bool parse_bool(const std::string& section, const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw_config("bad boolean value '" + v + "' for key '" + key + "' in [" + section + "]");
}

// "a:step:b" (inclusive) or a comma list.
std::vector<double> parse_grid(const std::string& section, const std::string& key,
                               const std::string& v) {
  std::vector<double> out;
  if (v.find(':') != std::string::npos) {
    std::istringstream ss(v);
    std::string a, s, b;
    if (!std::getline(ss, a, ':') || !std::getline(ss, s, ':') || !std::getline(ss, b))
      throw_config("bad grid range '" + v + "' for key '" + key + "'");
    const double lo = parse_double(section, key, trim(a));
    const double step = parse_double(section, key, trim(s));
    const double hi = parse_double(section, key, trim(b));
    if (step <= 0.0 || hi < lo) throw_config("bad grid range '" + v + "' for key '" + key + "'");
    const long n = std::lround((hi - lo) / step);
    for (long i = 0; i <= n; ++i) out.push_back(lo + step * static_cast<double>(i));
    return out;
  }
  std::istringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(section, key, trim(item)));
  if (out.empty()) throw_config("empty grid for key '" + key + "'");
  return out;
}

std::vector<KeySpec> schema() {
  std::vector<KeySpec> keys;
  auto add = [&](const std::string& sec, const std::string& key, Kind kind,
                 std::function<void(RunConfig&, const std::string&, bool)> apply) {
    keys.push_back({sec, key, kind, std::move(apply)});
  };

  // [model]
  add("model", "design", Kind::Enum, [](RunConfig& c, const std::string& v, bool) {
    if (v == "two_qubit")
      c.model.design = Design::TwoQubit;
    else if (v == "qubit_resonator")
      c.model.design = Design::QubitResonator;
    else
      throw_config("unknown design '" + v + "' (expected two_qubit or qubit_resonator)");
  });
  add("model", "gamma_ph", Kind::Plain, [](RunConfig& c, const std::string& v, bool) {
    c.model.gamma_ph = parse_double("model", "gamma_ph", v);
  });
  add("model", "gamma", Kind::Rate, [](RunConfig& c, const std::string& v, bool abs) {
    c.model.gamma = parse_double("model", "gamma", v) * (abs ? 1.0 : c.model.gamma_ph);
  });
  add("model", "delta1", Kind::Rate, [](RunConfig& c, const std::string& v, bool abs) {
    c.model.delta1 = parse_double("model", "delta1", v) * (abs ? 1.0 : c.model.gamma_ph);
  });
  add("model", "delta2", Kind::Rate, [](RunConfig& c, const std::string& v, bool abs) {
    c.model.delta2 = parse_double("model", "delta2", v) * (abs ? 1.0 : c.model.gamma_ph);
  });
  add("model", "omega_p_d_over_pi", Kind::Plain, [](RunConfig& c, const std::string& v, bool) {
    c.model.omega_p_d_over_pi = parse_double("model", "omega_p_d_over_pi", v);
  });
  add("model", "eta", Kind::Plain, [](RunConfig& c, const std::string& v, bool) {
    c.model.eta = parse_double("model", "eta", v);
  });
  add("model", "fock_cutoff", Kind::Int, [](RunConfig& c, const std::string& v, bool) {
    c.model.fock_cutoff = parse_int("model", "fock_cutoff", v);
  });
  add("model", "include_ancilla", Kind::Bool, [](RunConfig& c, const std::string& v, bool) {
    c.model.include_ancilla = parse_bool("model", "include_ancilla", v);
  });
  add("model", "include_idle_qubits", Kind::Bool, [](RunConfig& c, const std::string& v, bool) {
    c.model.include_idle_qubits = parse_bool("model", "include_idle_qubits", v);
  });

  // [controls]
  add("controls", "direction", Kind::Enum, [](RunConfig& c, const std::string& v, bool) {
    if (v == "right")
      c.direction = Direction::Right;
    else if (v == "left")
      c.direction = Direction::Left;
    else
      throw_config("unknown direction '" + v + "' (expected right or left)");
  });
  add("controls", "t_start", Kind::Time, [](RunConfig& c, const std::string& v, bool abs) {
    c.t_start = parse_double("controls", "t_start", v) / (abs ? 1.0 : c.model.gamma_ph);
    c.window_set = true;
  });
  add("controls", "t_end", Kind::Time, [](RunConfig& c, const std::string& v, bool abs) {
    c.t_end = parse_double("controls", "t_end", v) / (abs ? 1.0 : c.model.gamma_ph);
    c.window_set = true;
  });
  for (const char* k : {"g1_csv", "g2_csv", "gamma1_csv", "gamma2_csv", "gamma_a_csv"}) {
    const std::string key = k;
    add("controls", key, Kind::Str, [key](RunConfig& c, const std::string& v, bool) {
      if (key == "g1_csv") c.g1_csv = v;
      else if (key == "g2_csv") c.g2_csv = v;
      else if (key == "gamma1_csv") c.gamma1_csv = v;
      else if (key == "gamma2_csv") c.gamma2_csv = v;
      else c.gamma_a_csv = v;
    });
  }

  // [integrator]
  add("integrator", "dt", Kind::Time, [](RunConfig& c, const std::string& v, bool abs) {
    c.dt = parse_double("integrator", "dt", v) / (abs ? 1.0 : c.model.gamma_ph);
  });
  add("integrator", "record_stride", Kind::Int, [](RunConfig& c, const std::string& v, bool) {
    c.record_stride = parse_int("integrator", "record_stride", v);
  });
  add("integrator", "method", Kind::Enum, [](RunConfig& c, const std::string& v, bool) {
    if (v == "rk4")
      c.method = Method::RK4Fixed;
    else if (v == "rk4_half_step")
      c.method = Method::RK4HalfStepAdaptive;
    else
      throw_config("unknown method '" + v + "' (expected rk4 or rk4_half_step)");
  });
  add("integrator", "trace_dev", Kind::Plain, [](RunConfig& c, const std::string& v, bool) {
    c.tol.trace_dev = parse_double("integrator", "trace_dev", v);
  });
  add("integrator", "min_eig", Kind::Plain, [](RunConfig& c, const std::string& v, bool) {
    c.tol.min_eig = parse_double("integrator", "min_eig", v);
  });
  add("integrator", "herm", Kind::Plain, [](RunConfig& c, const std::string& v, bool) {
    c.tol.herm = parse_double("integrator", "herm", v);
  });
  add("integrator", "leakage", Kind::Plain, [](RunConfig& c, const std::string& v, bool) {
    c.tol.leakage = parse_double("integrator", "leakage", v);
  });

  // [sweep]
  add("sweep", "name", Kind::Enum, [](RunConfig& c, const std::string& v, bool) {
    if (v == "eta")
      c.sweep_kind = SweepKind::Eta;
    else if (v == "detuning_distance")
      c.sweep_kind = SweepKind::DetuningDistance;
    else if (v == "bandwidth")
      c.sweep_kind = SweepKind::Bandwidth;
    else
      throw_config("unknown sweep name '" + v + "'");
  });
  add("sweep", "eta_grid", Kind::Grid, [](RunConfig& c, const std::string& v, bool) {
    c.eta_grid = parse_grid("sweep", "eta_grid", v);
  });
  add("sweep", "delta_omega_grid", Kind::Grid, [](RunConfig& c, const std::string& v, bool) {
    c.detuning_grid = parse_grid("sweep", "delta_omega_grid", v);
  });
  add("sweep", "d_over_lambda_grid", Kind::Grid, [](RunConfig& c, const std::string& v, bool) {
    c.distance_grid = parse_grid("sweep", "d_over_lambda_grid", v);
  });
  add("sweep", "bandwidth_ratio_grid", Kind::Grid, [](RunConfig& c, const std::string& v, bool) {
    c.bandwidth_grid = parse_grid("sweep", "bandwidth_ratio_grid", v);
  });
  add("sweep", "workers", Kind::Int, [](RunConfig& c, const std::string& v, bool) {
    c.workers = parse_int("sweep", "workers", v);
  });

  // [output]
  add("output", "dir", Kind::Str,
      [](RunConfig& c, const std::string& v, bool) { c.out_dir = v; });

  return keys;
}

const KeySpec* find_key(const std::vector<KeySpec>& keys, const std::string& section,
                        const std::string& key) {
  for (const auto& k : keys)
    if (k.section == section && k.key == key) return &k;
  return nullptr;
}

// Splits a trailing `abs` unit suffix off a scalar value.
std::pair<std::string, bool> split_abs(const std::string& v, Kind kind) {
  if (kind != Kind::Rate && kind != Kind::Time) return {v, false};
  const std::string t = trim(v);
  if (t.size() > 3 && t.substr(t.size() - 3) == "abs") {
    const std::string head = trim(t.substr(0, t.size() - 3));
    if (!head.empty()) return {head, true};
  }
  return {t, false};
}

void apply_entry(RunConfig& cfg, const std::vector<KeySpec>& keys, const std::string& section,
                 const std::string& key, const std::string& value) {
  const KeySpec* spec = find_key(keys, section, key);
  if (!spec) {
    // bare-key resolution for --set style entries
    if (section.empty()) {
      for (const auto& k : keys)
        if (k.key == key) {
          spec = &k;
          break;
        }
    }
    if (!spec)
      throw_config("unknown key '" + key + "'" +
                   (section.empty() ? "" : " in [" + section + "]"));
  }
  auto [v, abs] = split_abs(value, spec->kind);
  spec->apply(cfg, v, abs);
}

void finalize(RunConfig& cfg) {
  if (!cfg.window_set) {
    cfg.t_end = 12.0 / cfg.model.gamma_ph;
    cfg.t_start = -cfg.t_end;
  }
  if (cfg.model.gamma_ph <= 0.0) throw_config("gamma_ph must be positive");
  if (cfg.t_end <= cfg.t_start) throw_config("empty time window");
  if (cfg.workers < 1) throw_config("workers must be >= 1");
  cfg.model.validate();
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  const auto keys = schema();
  RunConfig cfg;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;

  // gamma_ph defines the unit; pick it up first so that every other rate
  // and time in the file is interpreted consistently.
  std::vector<std::tuple<std::string, std::string, std::string>> entries;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw_config(origin + ":" + std::to_string(lineno) + ": bad section");
      section = trim(s.substr(1, s.size() - 2));
      if (section != "model" && section != "controls" && section != "integrator" &&
          section != "sweep" && section != "output")
        throw_config(origin + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw_config(origin + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (section.empty())
      throw_config(origin + ":" + std::to_string(lineno) + ": key outside any section");
    entries.emplace_back(section, key, value);
  }

  for (const auto& [sec, key, value] : entries)
    if (sec == "model" && key == "gamma_ph") apply_entry(cfg, keys, sec, key, value);
  for (const auto& [sec, key, value] : entries) {
    if (sec == "model" && key == "gamma_ph") continue;
    apply_entry(cfg, keys, sec, key, value);
  }
  finalize(cfg);
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_io("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

void apply_override(RunConfig& cfg, const std::string& key_value) {
  const auto eq = key_value.find('=');
  if (eq == std::string::npos) throw_config("bad --set override '" + key_value + "'");
  const std::string key = trim(key_value.substr(0, eq));
  const std::string value = trim(key_value.substr(eq + 1));
  const auto keys = schema();
  apply_entry(cfg, keys, "", key, value);
  finalize(cfg);
}

std::string config_to_json(const RunConfig& cfg) {
  json j;
  j["units"] = "absolute";
  j["model"] = {
      {"design", cfg.model.design == Design::TwoQubit ? "two_qubit" : "qubit_resonator"},
      {"gamma", cfg.model.gamma},
      {"gamma_ph", cfg.model.gamma_ph},
      {"omega_p_d_over_pi", cfg.model.omega_p_d_over_pi},
      {"delta1", cfg.model.delta1},
      {"delta2", cfg.model.delta2},
      {"eta", cfg.model.eta},
      {"fock_cutoff", cfg.model.fock_cutoff},
      {"include_ancilla", cfg.model.include_ancilla},
      {"include_idle_qubits", cfg.model.include_idle_qubits},
  };
  j["controls"] = {
      {"direction", cfg.direction == Direction::Right ? "right" : "left"},
      {"t_start", cfg.t_start},
      {"t_end", cfg.t_end},
      {"g1_csv", cfg.g1_csv},
      {"g2_csv", cfg.g2_csv},
      {"gamma1_csv", cfg.gamma1_csv},
      {"gamma2_csv", cfg.gamma2_csv},
      {"gamma_a_csv", cfg.gamma_a_csv},
  };
  j["integrator"] = {
      {"dt", cfg.dt},
      {"record_stride", cfg.record_stride},
      {"method", cfg.method == Method::RK4Fixed ? "rk4" : "rk4_half_step"},
      {"trace_dev", cfg.tol.trace_dev},
      {"min_eig", cfg.tol.min_eig},
      {"herm", cfg.tol.herm},
      {"leakage", cfg.tol.leakage},
  };
  const char* name = cfg.sweep_kind == SweepKind::Eta
                         ? "eta"
                         : cfg.sweep_kind == SweepKind::DetuningDistance ? "detuning_distance"
                                                                         : "bandwidth";
  j["sweep"] = {
      {"name", name},
      {"eta_grid", cfg.eta_grid},
      {"delta_omega_grid", cfg.detuning_grid},
      {"d_over_lambda_grid", cfg.distance_grid},
      {"bandwidth_ratio_grid", cfg.bandwidth_grid},
      {"workers", cfg.workers},
  };
  j["output"] = {{"dir", cfg.out_dir}};
  return j.dump(2) + "\n";
}

RunConfig config_from_json(const std::string& json_text) {
  json j = json::parse(json_text);
  RunConfig cfg;
  const auto& m = j.at("model");
  cfg.model.design = m.at("design") == "two_qubit" ? Design::TwoQubit : Design::QubitResonator;
  cfg.model.gamma = m.at("gamma");
  cfg.model.gamma_ph = m.at("gamma_ph");
  cfg.model.omega_p_d_over_pi = m.at("omega_p_d_over_pi");
  cfg.model.delta1 = m.at("delta1");
  cfg.model.delta2 = m.at("delta2");
  cfg.model.eta = m.at("eta");
  cfg.model.fock_cutoff = m.at("fock_cutoff");
  cfg.model.include_ancilla = m.at("include_ancilla");
  cfg.model.include_idle_qubits = m.at("include_idle_qubits");
  const auto& c = j.at("controls");
  cfg.direction = c.at("direction") == "right" ? Direction::Right : Direction::Left;
  cfg.t_start = c.at("t_start");
  cfg.t_end = c.at("t_end");
  cfg.window_set = true;
  cfg.g1_csv = c.at("g1_csv");
  cfg.g2_csv = c.at("g2_csv");
  cfg.gamma1_csv = c.at("gamma1_csv");
  cfg.gamma2_csv = c.at("gamma2_csv");
  cfg.gamma_a_csv = c.at("gamma_a_csv");
  const auto& i = j.at("integrator");
  cfg.dt = i.at("dt");
  cfg.record_stride = i.at("record_stride");
  cfg.method = i.at("method") == "rk4" ? Method::RK4Fixed : Method::RK4HalfStepAdaptive;
  cfg.tol.trace_dev = i.at("trace_dev");
  cfg.tol.min_eig = i.at("min_eig");
  cfg.tol.herm = i.at("herm");
  cfg.tol.leakage = i.at("leakage");
  const auto& s = j.at("sweep");
  const std::string name = s.at("name");
  cfg.sweep_kind = name == "eta" ? SweepKind::Eta
                                 : name == "detuning_distance" ? SweepKind::DetuningDistance
                                                               : SweepKind::Bandwidth;
  cfg.eta_grid = s.at("eta_grid").get<std::vector<double>>();
  cfg.detuning_grid = s.at("delta_omega_grid").get<std::vector<double>>();
  cfg.distance_grid = s.at("d_over_lambda_grid").get<std::vector<double>>();
  cfg.bandwidth_grid = s.at("bandwidth_ratio_grid").get<std::vector<double>>();
  cfg.workers = s.at("workers");
  cfg.out_dir = j.at("output").at("dir");
  return cfg;
}

bool config_equal(const RunConfig& a, const RunConfig& b) {
  return a.model.design == b.model.design && a.model.gamma == b.model.gamma &&
         a.model.gamma_ph == b.model.gamma_ph &&
         a.model.omega_p_d_over_pi == b.model.omega_p_d_over_pi &&
         a.model.delta1 == b.model.delta1 && a.model.delta2 == b.model.delta2 &&
         a.model.eta == b.model.eta && a.model.fock_cutoff == b.model.fock_cutoff &&
         a.model.include_ancilla == b.model.include_ancilla &&
         a.model.include_idle_qubits == b.model.include_idle_qubits &&
         a.direction == b.direction && a.t_start == b.t_start && a.t_end == b.t_end &&
         a.dt == b.dt && a.record_stride == b.record_stride && a.method == b.method &&
         a.tol.trace_dev == b.tol.trace_dev && a.tol.min_eig == b.tol.min_eig &&
         a.tol.herm == b.tol.herm && a.tol.leakage == b.tol.leakage &&
         a.sweep_kind == b.sweep_kind && a.eta_grid == b.eta_grid &&
         a.detuning_grid == b.detuning_grid && a.distance_grid == b.distance_grid &&
         a.bandwidth_grid == b.bandwidth_grid && a.g1_csv == b.g1_csv && a.g2_csv == b.g2_csv &&
         a.gamma1_csv == b.gamma1_csv && a.gamma2_csv == b.gamma2_csv &&
         a.gamma_a_csv == b.gamma_a_csv && a.out_dir == b.out_dir && a.workers == b.workers;
}

}  // namespace chiralwg
