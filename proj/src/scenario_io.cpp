#include "scenario_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fmt/format.h>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "error.hpp"

namespace bhsm {

namespace {

// ---------------------------------------------------------------------------
// Sectioned key-value config parsing.
// ---------------------------------------------------------------------------

struct ConfigValue {
  enum class Type { Number, String, List };
  Type type = Type::Number;
  double num = 0.0;
  std::string str;
  std::vector<ConfigValue> list;
  std::size_t line = 0;
};

struct ConfigEntry {
  ConfigValue value;
  bool consumed = false;
};

struct Section {
  std::size_t line = 0;
  std::map<std::string, ConfigEntry, std::less<>> entries;
};

using Config = std::map<std::string, Section, std::less<>>;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

class ValueParser {
 public:
  ValueParser(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  ConfigValue parse() {
    ConfigValue v = parse_value();
    skip_ws();
    if (pos_ != text_.size()) {
      fail(fmt::format("trailing characters after value: '{}'", text_.substr(pos_)));
    }
    return v;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError(line_, fmt::format("line {}: {}", line_, what));
  }

  ConfigValue parse_value() {
    skip_ws();
    if (pos_ >= text_.size()) fail("missing value");
    ConfigValue v;
    v.line = line_;
    const char c = text_[pos_];
    if (c == '[') {
      ++pos_;
      v.type = ConfigValue::Type::List;
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == ']') {
        ++pos_;
        return v;
      }
      while (true) {
        v.list.push_back(parse_value());
        skip_ws();
        if (pos_ >= text_.size()) fail("unterminated list");
        if (text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (text_[pos_] == ']') {
          ++pos_;
          return v;
        }
        fail(fmt::format("expected ',' or ']' in list, found '{}'", text_[pos_]));
      }
    }
    if (c == '"') {
      ++pos_;
      const auto end = text_.find('"', pos_);
      if (end == std::string_view::npos) fail("unterminated string");
      v.type = ConfigValue::Type::String;
      v.str = std::string(text_.substr(pos_, end - pos_));
      pos_ = end + 1;
      return v;
    }
    // number
    std::size_t end = pos_;
    while (end < text_.size() && text_[end] != ',' && text_[end] != ']' && text_[end] != ' ' &&
           text_[end] != '\t') {
      ++end;
    }
    const std::string_view tok = text_.substr(pos_, end - pos_);
    double value = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
      fail(fmt::format("expected a number, found '{}'", tok));
    }
    v.type = ConfigValue::Type::Number;
    v.num = value;
    pos_ = end;
    return v;
  }

  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

Config parse_config(std::string_view text) {
  Config config;
  Section* current = nullptr;
  std::string current_name;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(line_no, fmt::format("line {}: malformed section header '{}'", line_no, line));
      }
      const auto name = std::string(trim(line.substr(1, line.size() - 2)));
      if (name.empty()) {
        throw ConfigError(line_no, fmt::format("line {}: empty section name", line_no));
      }
      if (config.contains(name)) {
        throw ConfigError(line_no, fmt::format("line {}: duplicate section [{}]", line_no, name));
      }
      current = &config[name];
      current->line = line_no;
      current_name = name;
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(line_no, fmt::format("line {}: expected 'key = value', found '{}'", line_no, line));
    }
    if (current == nullptr) {
      throw ConfigError(line_no, fmt::format("line {}: key outside of any [section]", line_no));
    }
    const auto key = std::string(trim(line.substr(0, eq)));
    if (key.empty()) {
      throw ConfigError(line_no, fmt::format("line {}: empty key", line_no));
    }
    if (current->entries.contains(key)) {
      throw ConfigError(line_no, fmt::format("line {}: duplicate key '{}' in [{}]", line_no, key, current_name));
    }
    ConfigEntry entry;
    entry.value = ValueParser(trim(line.substr(eq + 1)), line_no).parse();
    current->entries.emplace(key, std::move(entry));
  }
  return config;
}

class SectionReader {
 public:
  SectionReader(Config& config, const std::string& name, bool required) : name_(name) {
    auto it = config.find(name);
    if (it == config.end()) {
      if (required) {
        throw ConfigError(0, fmt::format("missing required section [{}]", name));
      }
      return;
    }
    section_ = &it->second;
  }

  bool present() const { return section_ != nullptr; }

  const ConfigValue* find(std::string_view key) {
    if (section_ == nullptr) return nullptr;
    auto it = section_->entries.find(key);
    if (it == section_->entries.end()) return nullptr;
    it->second.consumed = true;
    return &it->second.value;
  }

  const ConfigValue& require(std::string_view key) {
    const ConfigValue* v = find(key);
    if (v == nullptr) {
      throw ConfigError(section_ != nullptr ? section_->line : 0,
                        fmt::format("missing required key '{}' in [{}]", key, name_));
    }
    return *v;
  }

  double number(const ConfigValue& v) const {
    if (v.type != ConfigValue::Type::Number) {
      throw ConfigError(v.line, fmt::format("line {}: expected a number in [{}]", v.line, name_));
    }
    return v.num;
  }

  double require_number(std::string_view key) { return number(require(key)); }

  double number_or(std::string_view key, double fallback) {
    const ConfigValue* v = find(key);
    return v == nullptr ? fallback : number(*v);
  }

  std::string require_string(std::string_view key) {
    const ConfigValue& v = require(key);
    if (v.type != ConfigValue::Type::String) {
      throw ConfigError(v.line, fmt::format("line {}: expected a quoted string for '{}'", v.line, key));
    }
    return v.str;
  }

  std::string string_or(std::string_view key, std::string fallback) {
    const ConfigValue* v = find(key);
    if (v == nullptr) return fallback;
    if (v->type != ConfigValue::Type::String) {
      throw ConfigError(v->line, fmt::format("line {}: expected a quoted string for '{}'", v->line, key));
    }
    return v->str;
  }

  std::vector<double> number_list(const ConfigValue& v) const {
    if (v.type != ConfigValue::Type::List) {
      throw ConfigError(v.line, fmt::format("line {}: expected a list in [{}]", v.line, name_));
    }
    std::vector<double> out;
    out.reserve(v.list.size());
    for (const auto& item : v.list) {
      if (item.type != ConfigValue::Type::Number) {
        throw ConfigError(item.line, fmt::format("line {}: expected numeric list entries", item.line));
      }
      out.push_back(item.num);
    }
    return out;
  }

  std::vector<SignalAtom> atom_list(std::string_view key) {
    const ConfigValue* v = find(key);
    if (v == nullptr) return {};
    if (v->type != ConfigValue::Type::List) {
      throw ConfigError(v->line, fmt::format("line {}: '{}' must be a list of [kind, amplitude, frequency]",
                                             v->line, key));
    }
    std::vector<SignalAtom> out;
    for (const auto& item : v->list) {
      if (item.type != ConfigValue::Type::List || item.list.size() != 3 ||
          item.list[0].type != ConfigValue::Type::String || item.list[1].type != ConfigValue::Type::Number ||
          item.list[2].type != ConfigValue::Type::Number) {
        throw ConfigError(item.line,
                          fmt::format("line {}: each '{}' entry must be [\"kind\", amplitude, frequency]",
                                      item.line, key));
      }
      SignalAtom atom;
      try {
        atom.kind = atom_kind_from_name(item.list[0].str);
      } catch (const Error& e) {
        throw ConfigError(item.line, fmt::format("line {}: {}", item.line, e.what()));
      }
      atom.amplitude = item.list[1].num;
      atom.frequency = item.list[2].num;
      out.push_back(atom);
    }
    return out;
  }

 private:
  std::string name_;
  Section* section_ = nullptr;
};

void reject_unknown(const Config& config, const std::set<std::string>& known_sections) {
  for (const auto& [name, section] : config) {
    if (!known_sections.contains(name)) {
      throw ConfigError(section.line, fmt::format("line {}: unknown section [{}]", section.line, name));
    }
    for (const auto& [key, entry] : section.entries) {
      if (!entry.consumed) {
        throw ConfigError(entry.value.line,
                          fmt::format("line {}: unknown key '{}' in [{}]", entry.value.line, key, name));
      }
    }
  }
}

HongParams read_hong_section(Config& config) {
  SectionReader hong(config, "hong", /*required=*/true);
  const double r_raw = hong.require_number("r");
  const int r = static_cast<int>(r_raw);
  if (static_cast<double>(r) != r_raw || r < 1) {
    throw ConfigError(0, fmt::format("[hong] r must be a positive integer, got {}", r_raw));
  }
  const double kappa = hong.require_number("kappa");
  const double p_base = hong.number_or("p_base", 1.0);
  HongParams params;
  params.profile = make_profile(r, kappa, p_base);
  params.gains = hong.number_list(hong.require("gains"));
  params.validate();
  return params;
}

GainFunction read_gain_function(SectionReader& section) {
  GainFunction g;
  const std::string kind = section.string_or("g_kind", "constant");
  if (kind == "constant") {
    g.kind = GainFunction::Kind::Constant;
  } else if (kind == "affine") {
    g.kind = GainFunction::Kind::Affine;
  } else {
    throw ConfigError(0, fmt::format("g_kind must be \"constant\" or \"affine\", got \"{}\"", kind));
  }
  g.c0 = section.number_or("g_c0", 1.0);
  g.c1 = section.number_or("g_c1", 0.0);
  g.validate();
  return g;
}

std::string file_stem(const std::string& path) {
  const auto slash = path.find_last_of("/\\");
  std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
  const auto dot = name.find_last_of('.');
  if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
  return name;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::Io, fmt::format("cannot open '{}' for reading", path));
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::Io, fmt::format("cannot open '{}' for writing", path));
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) {
    throw Error(ErrorKind::Io, fmt::format("failed writing '{}'", path));
  }
}

void format_field(std::string& out, double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  out += buf;
}

double parse_field(std::string_view tok, std::size_t line_no) {
  double value = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
    throw Error(ErrorKind::Io, fmt::format("trace line {}: bad numeric field '{}'", line_no, tok));
  }
  return value;
}

}  // namespace

Scenario parse_scenario(std::string_view text, std::string name) {
  Config config = parse_config(text);
  Scenario scenario;
  scenario.name = std::move(name);
  scenario.hong = read_hong_section(config);

  SectionReader mode(config, "mode", /*required=*/true);
  const std::string variant = mode.require_string("variant");
  if (variant == "nominal_continuous") {
    scenario.mode.variant = ControllerVariant::NominalContinuous;
  } else if (variant == "nominal_sign") {
    scenario.mode.variant = ControllerVariant::NominalSign;
  } else if (variant == "fixed_gain_robust") {
    scenario.mode.variant = ControllerVariant::FixedGainRobust;
    scenario.mode.phi_bar = mode.require_number("phi_bar");
    scenario.mode.gamma_m = mode.require_number("gamma_m");
  } else if (variant == "barrier") {
    scenario.mode.variant = ControllerVariant::BarrierTimeVarying;
    scenario.mode.k = mode.number_or("k", 1.0);
    scenario.mode.g = read_gain_function(mode);
  } else {
    throw ConfigError(0, fmt::format("[mode] variant must be one of \"nominal_continuous\", \"nominal_sign\", "
                                     "\"fixed_gain_robust\", \"barrier\"; got \"{}\"",
                                     variant));
  }

  SectionReader schedule(config, "schedule", /*required=*/false);
  if (schedule.present()) {
    GainSchedule s;
    s.epsilon = schedule.require_number("epsilon");
    s.decay_rate = schedule.require_number("M");
    const std::string ramp = schedule.string_or("ramp", "identity");
    if (ramp == "identity") {
      s.ramp_kind = RampKind::Identity;
    } else if (ramp == "power_law") {
      s.ramp_kind = RampKind::PowerLaw;
    } else {
      throw ConfigError(0, fmt::format("[schedule] ramp must be \"identity\" or \"power_law\", got \"{}\"", ramp));
    }
    s.ramp_exponent = schedule.number_or("ramp_exponent", 1.0);
    s.clamp_delta = schedule.number_or("clamp_delta", 1e-6);
    s.k = scenario.mode.k;
    s.g = scenario.mode.g;
    scenario.schedule = s;
  }

  SectionReader uncertainty(config, "uncertainty", /*required=*/false);
  if (uncertainty.present()) {
    scenario.uncertainty.phi_terms = uncertainty.atom_list("phi");
    scenario.uncertainty.gamma_terms = uncertainty.atom_list("gamma");
    const ConfigValue* phi_bar = uncertainty.find("phi_bar");
    const ConfigValue* gamma_m = uncertainty.find("gamma_m");
    const ConfigValue* gamma_M = uncertainty.find("gamma_M");
    const int n_bounds = (phi_bar != nullptr) + (gamma_m != nullptr) + (gamma_M != nullptr);
    if (n_bounds != 0 && n_bounds != 3) {
      throw ConfigError(0, "[uncertainty] declared bounds need all of phi_bar, gamma_m, gamma_M");
    }
    if (n_bounds == 3) {
      scenario.uncertainty.declared_bounds =
          DeclaredBounds{uncertainty.number(*phi_bar), uncertainty.number(*gamma_m), uncertainty.number(*gamma_M)};
    }
  }

  SectionReader sim(config, "sim", /*required=*/true);
  scenario.z0 = sim.number_list(sim.require("z0"));
  scenario.tau = sim.require_number("tau");
  scenario.horizon = sim.require_number("horizon");
  const double stride_raw = sim.number_or("record_stride", 100.0);
  if (stride_raw < 1.0 || static_cast<double>(static_cast<std::uint32_t>(stride_raw)) != stride_raw) {
    throw ConfigError(0, fmt::format("[sim] record_stride must be a positive integer, got {}", stride_raw));
  }
  scenario.record_stride = static_cast<std::uint32_t>(stride_raw);

  reject_unknown(config, {"hong", "mode", "schedule", "uncertainty", "sim"});
  scenario.validate();
  return scenario;
}

Scenario load_scenario(const std::string& path) {
  try {
    return parse_scenario(read_file(path), file_stem(path));
  } catch (const ConfigError& e) {
    throw ConfigError(e.line(), fmt::format("{}: {}", path, e.what()));
  }
}

HongParams parse_hong_params(std::string_view text, std::string name) {
  Config config = parse_config(text);
  if (config.contains("sim")) {
    return parse_scenario(text, std::move(name)).hong;
  }
  HongParams params = read_hong_section(config);
  reject_unknown(config, {"hong"});
  return params;
}

HongParams load_hong_params(const std::string& path) {
  try {
    return parse_hong_params(read_file(path), file_stem(path));
  } catch (const ConfigError& e) {
    throw ConfigError(e.line(), fmt::format("{}: {}", path, e.what()));
  }
}

std::string trace_to_csv(const Trace& trace) {
  std::string out = "t";
  for (int i = 1; i <= trace.r; ++i) out += fmt::format(",z{}", i);
  out += ",u,V,eta,phi_hat\n";
  const bool scheduled = trace.has_schedule_columns();
  for (std::size_t i = 0; i < trace.size(); ++i) {
    format_field(out, trace.times[i]);
    const auto z = trace.state(i);
    for (double zi : z) {
      out += ',';
      format_field(out, zi);
    }
    out += ',';
    format_field(out, trace.controls[i]);
    out += ',';
    format_field(out, trace.V_vals[i]);
    out += ',';
    if (scheduled) format_field(out, trace.eta_vals[i]);
    out += ',';
    if (scheduled) format_field(out, trace.phi_hat_vals[i]);
    out += '\n';
  }
  return out;
}

void write_trace_csv(const Trace& trace, const std::string& path) { write_file(path, trace_to_csv(trace)); }

Trace parse_trace_csv(std::string_view text, std::string_view origin) {
  std::size_t pos = 0;
  std::size_t line_no = 0;
  auto next_line = [&]() -> std::optional<std::string_view> {
    if (pos >= text.size()) return std::nullopt;
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
  };

  const auto header = next_line();
  if (!header) {
    throw Error(ErrorKind::Io, fmt::format("{}: empty trace file", origin));
  }
  std::vector<std::string_view> cols;
  {
    std::string_view rest = *header;
    while (true) {
      const auto comma = rest.find(',');
      cols.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
  }
  const std::size_t n_cols = cols.size();
  if (n_cols < 5 || cols.front() != "t" || cols[n_cols - 4] != "u" || cols[n_cols - 3] != "V" ||
      cols[n_cols - 2] != "eta" || cols.back() != "phi_hat") {
    throw Error(ErrorKind::Io, fmt::format("{}: unexpected trace header '{}'", origin, *header));
  }
  const int r = static_cast<int>(n_cols) - 5;
  for (int i = 0; i < r; ++i) {
    if (cols[static_cast<std::size_t>(i) + 1] != fmt::format("z{}", i + 1)) {
      throw Error(ErrorKind::Io, fmt::format("{}: unexpected trace header '{}'", origin, *header));
    }
  }

  Trace trace;
  trace.r = r;
  std::vector<std::string_view> fields;
  while (auto line = next_line()) {
    if (line->empty()) continue;
    fields.clear();
    std::string_view rest = *line;
    while (true) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (fields.size() != n_cols) {
      throw Error(ErrorKind::Io, fmt::format("{} line {}: expected {} fields, found {}", origin, line_no,
                                             n_cols, fields.size()));
    }
    trace.times.push_back(parse_field(fields[0], line_no));
    for (int i = 0; i < r; ++i) {
      trace.states.push_back(parse_field(fields[static_cast<std::size_t>(i) + 1], line_no));
    }
    trace.controls.push_back(parse_field(fields[n_cols - 4], line_no));
    trace.V_vals.push_back(parse_field(fields[n_cols - 3], line_no));
    const std::string_view eta = fields[n_cols - 2];
    const std::string_view phi_hat = fields[n_cols - 1];
    if (eta.empty() != phi_hat.empty()) {
      throw Error(ErrorKind::Io,
                  fmt::format("{} line {}: eta and phi_hat must be both present or both empty", origin, line_no));
    }
    if (!eta.empty()) {
      trace.eta_vals.push_back(parse_field(eta, line_no));
      trace.phi_hat_vals.push_back(parse_field(phi_hat, line_no));
    }
  }
  if (!trace.eta_vals.empty() && trace.eta_vals.size() != trace.times.size()) {
    throw Error(ErrorKind::Io, fmt::format("{}: inconsistent eta/phi_hat columns", origin));
  }
  return trace;
}

Trace read_trace_csv(const std::string& path) { return parse_trace_csv(read_file(path), path); }

std::string metrics_to_json(const SummaryMetrics& metrics) {
  nlohmann::ordered_json j;
  if (metrics.latch_time) j["latch_time"] = *metrics.latch_time;
  j["steady_sup"] = metrics.steady_sup;
  if (metrics.accuracy_lambdas) j["accuracy_lambdas"] = *metrics.accuracy_lambdas;
  if (metrics.trap_violations) j["trap_violations"] = *metrics.trap_violations;
  if (metrics.max_trap_excess) j["max_trap_excess"] = *metrics.max_trap_excess;
  j["gain_sup_late"] = metrics.gain_sup_late;
  if (metrics.gain_bound) j["gain_bound"] = *metrics.gain_bound;
  if (metrics.phi_bar_bar) j["phi_bar_bar"] = *metrics.phi_bar_bar;
  if (metrics.h_m) j["h_m"] = *metrics.h_m;
  if (metrics.h_m_unbounded) j["h_m_unbounded"] = true;
  j["clamp_events"] = metrics.clamp_events;
  return j.dump(2);
}

void write_metrics_json(const SummaryMetrics& metrics, const std::string& path) {
  write_file(path, metrics_to_json(metrics) + "\n");
}

std::string verify_report_to_json(const VerifyReport& report) {
  nlohmann::ordered_json j;
  j["seed"] = report.seed;
  j["samples"] = report.samples;
  j["passed"] = report.passed();
  j["checks"] = nlohmann::ordered_json::array();
  nlohmann::ordered_json failures = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    nlohmann::ordered_json jc;
    jc["name"] = c.name;
    jc["samples"] = c.samples;
    jc["failures"] = c.failures;
    jc["worst_residual"] = c.worst_residual;
    jc["tolerance"] = c.tolerance;
    jc["passed"] = c.passed();
    j["checks"].push_back(jc);
    if (!c.passed()) {
      failures.push_back(fmt::format("{}: {} of {} samples exceeded tolerance {:g} (worst residual {:g})",
                                     c.name, c.failures, c.samples, c.tolerance, c.worst_residual));
    }
  }
  j["failures"] = failures;
  return j.dump(2);
}

}  // namespace bhsm
