#include "formsim/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

namespace formsim::sim {

namespace {

struct RawValue {
  std::string text;
  int line = 0;
  bool used = false;
};

// Parsed file: fully-qualified key ("section.key", or bare "key" at top
// level) -> value text and line.
using RawConfig = std::map<std::string, RawValue>;

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(const std::string& source, int line, const std::string& what) {
  std::ostringstream msg;
  msg << source << ":";
  if (line > 0) msg << line << ":";
  msg << " " << what;
  throw ConfigError(msg.str());
}

RawConfig read_raw(std::istream& in, const std::string& source) {
  RawConfig raw;
  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        fail(source, lineno, "malformed section header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) fail(source, lineno, "empty section name");
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(source, lineno, "expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(source, lineno, "empty key");
    if (value.empty()) fail(source, lineno, "empty value for key '" + key + "'");

    const std::string full = section.empty() ? key : section + "." + key;
    if (raw.count(full))
      fail(source, lineno, "duplicate key '" + full + "' (first at line " +
                               std::to_string(raw[full].line) + ")");
    raw[full] = RawValue{value, lineno, false};
  }
  return raw;
}

double parse_double(const std::string& source, int line, const std::string& key,
                    const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || trim(end).size() != 0 || !std::isfinite(v))
    fail(source, line, "key '" + key + "': expected a number, got '" + text + "'");
  return v;
}

class Reader {
 public:
  Reader(RawConfig raw, std::string source)
      : raw_(std::move(raw)), source_(std::move(source)) {}

  bool has(const std::string& key) const { return raw_.count(key) > 0; }

  std::optional<double> opt_number(const std::string& key) {
    auto it = raw_.find(key);
    if (it == raw_.end()) return std::nullopt;
    it->second.used = true;
    return parse_double(source_, it->second.line, key, it->second.text);
  }

  double number(const std::string& key) {
    auto v = opt_number(key);
    if (!v) fail(source_, 0, "missing required key '" + key + "'");
    return *v;
  }

  double number_or(const std::string& key, double fallback) {
    return opt_number(key).value_or(fallback);
  }

  std::optional<std::string> opt_token(const std::string& key) {
    auto it = raw_.find(key);
    if (it == raw_.end()) return std::nullopt;
    it->second.used = true;
    return it->second.text;
  }

  std::vector<double> number_list(const std::string& key) {
    auto it = raw_.find(key);
    if (it == raw_.end()) fail(source_, 0, "missing required key '" + key + "'");
    it->second.used = true;
    std::vector<double> out;
    std::stringstream ss(it->second.text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty())
        fail(source_, it->second.line, "key '" + key + "': empty list element");
      out.push_back(parse_double(source_, it->second.line, key, item));
    }
    if (out.empty())
      fail(source_, it->second.line, "key '" + key + "': empty list");
    return out;
  }

  int line_of(const std::string& key) const {
    auto it = raw_.find(key);
    return it == raw_.end() ? 0 : it->second.line;
  }

  void check_field(bool ok, const std::string& key, const std::string& what) {
    if (!ok) fail(source_, line_of(key), "key '" + key + "': " + what);
  }

  void reject_unused() const {
    for (const auto& [key, value] : raw_)
      if (!value.used) fail(source_, value.line, "unknown key '" + key + "'");
  }

  const std::string& source() const { return source_; }

 private:
  RawConfig raw_;
  std::string source_;
};

vehicle::AgentState read_agent_state(Reader& r, const std::string& section) {
  vehicle::AgentState s;
  s.position = Eigen::Vector2d(r.number(section + ".x"), r.number(section + ".y"));
  s.speed = r.number(section + ".speed");
  s.heading = vehicle::wrap_angle(r.number(section + ".heading"));
  return s;
}

}  // namespace

ScenarioConfig parse_config(std::istream& in, const std::string& source_name) {
  Reader r(read_raw(in, source_name), source_name);

  const double format = r.number("format");
  r.check_field(format == 1.0, "format", "unsupported config format (expected 1)");

  const double dt = r.number_or("scenario.dt", 0.05);
  r.check_field(dt > 0.0, "scenario.dt", "must be > 0");
  const double horizon = r.number_or("scenario.horizon", 100.0);
  r.check_field(horizon >= dt, "scenario.horizon", "must be >= dt");
  const double tol = r.number_or("scenario.connectivity_tol", 1e-6);
  r.check_field(tol > 0.0, "scenario.connectivity_tol", "must be > 0");

  bool observer = false;
  if (auto tok = r.opt_token("scenario.observer")) {
    if (*tok == "on")
      observer = true;
    else if (*tok == "off")
      observer = false;
    else
      r.check_field(false, "scenario.observer", "expected on|off");
  }

  TargetInputMode mode = TargetInputMode::kSpeedHeading;
  if (auto tok = r.opt_token("scenario.target_input_mode")) {
    if (*tok == "speed-heading")
      mode = TargetInputMode::kSpeedHeading;
    else if (*tok == "cartesian")
      mode = TargetInputMode::kCartesian;
    else
      r.check_field(false, "scenario.target_input_mode",
                    "expected speed-heading|cartesian");
  }

  const double range = r.number("comm.range");
  r.check_field(range > 0.0, "comm.range", "must be > 0");
  const double sigma = r.number("comm.sigma");
  r.check_field(sigma > 0.0, "comm.sigma", "must be > 0");

  const double k1 = r.number("controller.k1");
  const double k2 = r.number("controller.k2");
  const double tau = r.number("controller.tau");
  r.check_field(tau > -0.5, "controller.tau", "must be > -1/2");

  const double v_min = r.number("bounds.v_min");
  const double v_max = r.number("bounds.v_max");
  r.check_field(0.0 < v_min && v_min < v_max, "bounds.v_min",
                "need 0 < v_min < v_max");

  const double delta = r.number("formation.delta");
  r.check_field(delta > 0.0, "formation.delta", "must be > 0");

  vehicle::AgentState target_state{Eigen::Vector2d::Zero(), 10.0, 0.0};
  if (r.has("target.x") || r.has("target.y") || r.has("target.speed") ||
      r.has("target.heading")) {
    target_state.position =
        Eigen::Vector2d(r.number_or("target.x", 0.0), r.number_or("target.y", 0.0));
    target_state.speed = r.number_or("target.speed", 10.0);
    target_state.heading = vehicle::wrap_angle(r.number_or("target.heading", 0.0));
  }
  r.check_field(target_state.speed > 0.0, "target.speed", "must be > 0");

  std::vector<vehicle::AgentState> uavs;
  for (int i = 1;; ++i) {
    const std::string section = "uav." + std::to_string(i);
    if (!r.has(section + ".x")) break;
    uavs.push_back(read_agent_state(r, section));
    const std::string key = section + ".speed";
    r.check_field(uavs.back().speed >= v_min && uavs.back().speed <= v_max, key,
                  "initial speed outside [v_min, v_max]");
  }
  if (uavs.empty())
    fail(source_name, 0, "no UAVs defined (need at least a [uav.1] section)");

  std::vector<double> psi;
  if (r.has("formation.psi")) {
    psi = r.number_list("formation.psi");
    r.check_field(psi.size() == uavs.size(), "formation.psi",
                  "psi count must equal UAV count");
  } else {
    for (size_t i = 1; i <= uavs.size(); ++i)
      psi.push_back(2.0 * std::numbers::pi * static_cast<double>(i) /
                    static_cast<double>(uavs.size()));
  }

  r.reject_unused();

  return ScenarioConfig{std::move(uavs),
                        vehicle::TargetProfile{target_state, vehicle::target_input},
                        control::FormationSpec(delta, std::move(psi)),
                        graph::CommModel(range, sigma),
                        control::ControllerParams(k1, k2, tau),
                        vehicle::VelocityBounds(v_min, v_max),
                        dt,
                        horizon,
                        observer,
                        tol,
                        mode};
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  return parse_config(in, path);
}

}  // namespace formsim::sim
