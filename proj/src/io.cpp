#include "nslab/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "nslab/error.hpp"

namespace nslab::io {

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool key_char(char c, bool first) {
  if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return true;
  return !first && (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-');
}

[[noreturn]] void syntax(const std::string& source, int line, int col, const std::string& msg) {
  throw Error(ErrorKind::Syntax, source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  return out;
}

std::optional<double> parse_double(const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  const auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || p != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<long long> parse_int(const std::string& s) {
  long long v = 0;
  const char* end = s.data() + s.size();
  const auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || p != end) return std::nullopt;
  return v;
}

std::optional<bool> parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  return std::nullopt;
}

std::optional<ShellSpec> parse_shell(const std::string& s) {
  const auto colon = s.find(':');
  const auto m = parse_int(trim(s.substr(0, colon)));
  if (!m) return std::nullopt;
  ShellSpec spec{static_cast<int>(*m), 1.0};
  if (colon != std::string::npos) {
    const auto a = parse_double(trim(s.substr(colon + 1)));
    if (!a) return std::nullopt;
    spec.amplitude = *a;
  }
  return spec;
}

}  // namespace

std::uint64_t Config::hash() const {
  std::string canon;
  for (const auto& [k, e] : entries) canon += k + "=" + e.value + "\n";
  return fnv1a(canon);
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = entries.find(key);
  return it == entries.end() ? fallback : it->second.value;
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = entries.find(key);
  if (it == entries.end()) return fallback;
  const auto v = parse_double(it->second.value);
  if (!v) throw Error(ErrorKind::Schema, key + ": expected a number, got '" + it->second.value + "'");
  return *v;
}

long long Config::get_int(const std::string& key, long long fallback) const {
  const auto it = entries.find(key);
  if (it == entries.end()) return fallback;
  const auto v = parse_int(it->second.value);
  if (!v) throw Error(ErrorKind::Schema, key + ": expected an integer, got '" + it->second.value + "'");
  return *v;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto it = entries.find(key);
  if (it == entries.end()) return fallback;
  const auto v = parse_bool(it->second.value);
  if (!v) throw Error(ErrorKind::Schema, key + ": expected true/false, got '" + it->second.value + "'");
  return *v;
}

std::vector<int> Config::get_int_list(const std::string& key, const std::vector<int>& fallback) const {
  const auto it = entries.find(key);
  if (it == entries.end()) return fallback;
  std::vector<int> out;
  for (const auto& item : split_list(it->second.value)) {
    const auto v = parse_int(item);
    if (!v) throw Error(ErrorKind::Schema, key + ": expected a list of integers, got '" + it->second.value + "'");
    out.push_back(static_cast<int>(*v));
  }
  return out;
}

std::vector<ShellSpec> Config::get_shells(const std::string& key) const {
  const auto it = entries.find(key);
  if (it == entries.end()) return {};
  std::vector<ShellSpec> out;
  for (const auto& item : split_list(it->second.value)) {
    const auto s = parse_shell(item);
    if (!s) throw Error(ErrorKind::Schema, key + ": expected 'lambda_sq:amplitude, ...', got '" + it->second.value + "'");
    out.push_back(*s);
  }
  return out;
}

Config parse_config_text(std::string_view text, const std::string& source) {
  Config cfg;
  cfg.source = source;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (trim(line).empty()) continue;

    const std::size_t key_start = line.find_first_not_of(" \t");
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      syntax(source, line_no, static_cast<int>(line.size() + 1), "expected '=' after key");
    std::size_t key_end = key_start;
    while (key_end < eq && key_char(line[key_end], key_end == key_start)) ++key_end;
    const std::string key(line.substr(key_start, key_end - key_start));
    if (key.empty()) syntax(source, line_no, static_cast<int>(key_start + 1), "missing key before '='");
    for (std::size_t i = key_end; i < eq; ++i)
      if (line[i] != ' ' && line[i] != '\t')
        syntax(source, line_no, static_cast<int>(i + 1), std::string("unexpected character '") + line[i] + "' in key");
    std::size_t value_start = eq + 1;
    while (value_start < line.size() && (line[value_start] == ' ' || line[value_start] == '\t')) ++value_start;
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) syntax(source, line_no, static_cast<int>(eq + 2), "missing value for '" + key + "'");
    if (const auto it = cfg.entries.find(key); it != cfg.entries.end())
      syntax(source, line_no, static_cast<int>(key_start + 1),
             "duplicate key '" + key + "' (first set on line " + std::to_string(it->second.line) + ")");
    cfg.entries.emplace(key, ConfigEntry{value, line_no, static_cast<int>(value_start + 1)});
  }
  return cfg;
}

Config parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::Io, "error while reading " + path.string());
  return parse_config_text(ss.str(), path.string());
}

const SchemaKey* Schema::find(const std::string& key) const {
  for (const auto& k : keys)
    if (k.key == key) return &k;
  return nullptr;
}

namespace {

SchemaKey key(std::string name, ValueType type, std::string help, bool required = false) {
  SchemaKey k;
  k.key = std::move(name);
  k.type = type;
  k.help = std::move(help);
  k.required = required;
  return k;
}

SchemaKey ranged(SchemaKey k, std::optional<double> lo, std::optional<double> hi, bool lo_ex = false, bool hi_ex = false) {
  k.min = lo;
  k.max = hi;
  k.min_exclusive = lo_ex;
  k.max_exclusive = hi_ex;
  return k;
}

void require(Schema& s, std::initializer_list<const char*> names) {
  for (const char* n : names)
    for (auto& k : s.keys)
      if (k.key == n) k.required = true;
}

std::vector<SchemaKey> data_keys() {
  return {
      ranged(key("N", ValueType::Int, "grid size (even)"), 8, 256),
      ranged(key("seed", ValueType::UInt, "random seed"), 0, std::nullopt),
      ranged(key("lambda_sq", ValueType::Int, "shell |n|^2 of the Beltrami band (0 for none)"), 0, std::nullopt),
      ranged(key("data_box", ValueType::Int, "perturbation data lives in |n_i| <= data_box"), 1, std::nullopt),
  };
}

}  // namespace

Schema schema_for(const std::string& name) {
  Schema s;
  s.name = name;
  if (name == "solve") {
    s.keys = data_keys();
    s.keys.push_back(key("input", ValueType::String, "snapshot with the initial velocity (overrides generation)"));
    s.keys.push_back(key("data", ValueType::String, "generated data: beltrami | random | mixed"));
    s.keys.push_back(ranged(key("amplitude", ValueType::Double, "l2 size of the random part"), 0, std::nullopt));
    s.keys.push_back(ranged(key("dt", ValueType::Double, "time step", true), 0, std::nullopt, true));
    s.keys.push_back(ranged(key("T", ValueType::Double, "final time", true), 0, std::nullopt, true));
    s.keys.push_back(ranged(key("record_every", ValueType::Int, "steps between recorded states"), 1, std::nullopt));
    s.keys.push_back(ranged(key("snapshot_every", ValueType::Int, "recorded states between snapshot files (0: none)"), 0,
                            std::nullopt));
    return s;
  }
  if (name == "picard") {
    s.keys = data_keys();
    s.keys.push_back(ranged(key("M0", ValueType::Double, "BMO^-1 size of the band data"), 0, std::nullopt, true));
    s.keys.push_back(ranged(key("amplitude", ValueType::Double, "X-size scale of u01 (l2 norm)"), 0, std::nullopt));
    s.keys.push_back(ranged(key("T1", ValueType::Double, "horizon; default from t1_horizon"), 0, std::nullopt, true));
    s.keys.push_back(ranged(key("epsilon", ValueType::Double, "smallness in the T1 horizon"), 0, std::nullopt, true));
    s.keys.push_back(ranged(key("b", ValueType::Double, "exponent, 0 < b < 1"), 0, 1, true, true));
    s.keys.push_back(ranged(key("C", ValueType::Double, "constant in the T1 horizon"), 0, std::nullopt, true));
    s.keys.push_back(ranged(key("steps", ValueType::Int, "mesh intervals on [0, T1]"), 2, std::nullopt));
    s.keys.push_back(ranged(key("tol", ValueType::Double, "stopping tolerance"), 0, std::nullopt, true));
    s.keys.push_back(ranged(key("max_iter", ValueType::Int, "iteration cap"), 1, std::nullopt));
    return s;
  }
  const std::string prefix = "experiment:";
  if (name.rfind(prefix, 0) == 0) {
    const Scenario sc = scenario_from_string(name.substr(prefix.size()));
    s.keys = data_keys();
    s.keys.push_back(key("scenario", ValueType::String, "must match the command-line scenario"));
    s.keys.push_back(ranged(key("M0", ValueType::Double, "BMO^-1 target of the data"), 0, std::nullopt, true));
    s.keys.push_back(ranged(key("epsilon", ValueType::Double, "size of the curl defect"), 0, std::nullopt, true));
    s.keys.push_back(ranged(key("eps_threshold", ValueType::Double, "admissible epsilon(b, M0)"), 0, std::nullopt, true));
    s.keys.push_back(ranged(key("b", ValueType::Double, "exponent, 0 < b < 1"), 0, 1, true, true));
    s.keys.push_back(ranged(key("eps1", ValueType::Double, "BMO^-1 size of u02"), 0, std::nullopt));
    s.keys.push_back(ranged(key("C", ValueType::Double, "constant in the T1 horizon"), 0, std::nullopt, true));
    s.keys.push_back(key("shells", ValueType::ShellList, "lambda_sq:amplitude list, increasing"));
    s.keys.push_back(ranged(key("dt", ValueType::Double, "time step"), 0, std::nullopt, true));
    s.keys.push_back(ranged(key("record_every", ValueType::Int, "steps between recorded states"), 1, std::nullopt));
    s.keys.push_back(ranged(key("horizon_extra", ValueType::Double, "run to T2 + horizon_extra"), 0, std::nullopt));
    s.keys.push_back(ranged(key("picard_steps", ValueType::Int, "mesh intervals on [0, T1]"), 2, std::nullopt));
    s.keys.push_back(ranged(key("picard_tol", ValueType::Double, "Picard tolerance"), 0, std::nullopt, true));
    s.keys.push_back(key("eps_scaling", ValueType::Bool, "extra runs at epsilon, epsilon/2, epsilon/4"));
    s.keys.push_back(ranged(key("ensemble", ValueType::Int, "ensemble size (>= 20)"), 20, std::nullopt));
    s.keys.push_back(key("grids", ValueType::IntList, "grid sizes for the estimate suite"));
    s.keys.push_back(ranged(key("amplitude", ValueType::Double, "ensemble amplitude (0: all-zero)"), 0, std::nullopt));
    s.keys.push_back(key("lambda_sq_list", ValueType::IntList, "shells for beltrami_exactness"));
    switch (sc) {
      case Scenario::Theorem13: require(s, {"N", "lambda_sq", "M0", "epsilon", "b"}); break;
      case Scenario::Corollary18: require(s, {"N", "shells", "M0", "epsilon", "b"}); break;
      case Scenario::EstimateSuite: require(s, {"ensemble", "grids"}); break;
      case Scenario::BeltramiExactness: require(s, {"N", "lambda_sq_list", "dt"}); break;
    }
    return s;
  }
  throw Error(ErrorKind::InvalidArgument, "no schema named '" + name + "'");
}

void validate(const Config& cfg, const Schema& schema) {
  std::vector<std::string> problems;
  auto where = [&](const std::string& k) {
    const auto& e = cfg.entries.at(k);
    return cfg.source + ":" + std::to_string(e.line) + ":" + std::to_string(e.column) + ": ";
  };
  for (const auto& [k, e] : cfg.entries) {
    const SchemaKey* sk = schema.find(k);
    if (!sk) {
      problems.push_back(where(k) + "unknown key '" + k + "' for " + schema.name);
      continue;
    }
    std::vector<double> numbers;
    bool ok = true;
    switch (sk->type) {
      case ValueType::Int:
      case ValueType::UInt: {
        const auto v = parse_int(e.value);
        ok = v.has_value() && (sk->type == ValueType::Int || *v >= 0);
        if (ok) numbers.push_back(static_cast<double>(*v));
        break;
      }
      case ValueType::Double: {
        const auto v = parse_double(e.value);
        ok = v.has_value();
        if (ok) numbers.push_back(*v);
        break;
      }
      case ValueType::Bool: ok = parse_bool(e.value).has_value(); break;
      case ValueType::String: break;
      case ValueType::IntList:
        for (const auto& item : split_list(e.value)) {
          const auto v = parse_int(item);
          if (!v) ok = false;
          else numbers.push_back(static_cast<double>(*v));
        }
        ok = ok && !numbers.empty();
        break;
      case ValueType::ShellList:
        for (const auto& item : split_list(e.value))
          if (!parse_shell(item)) ok = false;
        ok = ok && !split_list(e.value).empty();
        break;
    }
    if (!ok) {
      problems.push_back(where(k) + k + ": cannot parse '" + e.value + "'");
      continue;
    }
    for (double v : numbers) {
      const bool low = sk->min && (sk->min_exclusive ? v <= *sk->min : v < *sk->min);
      const bool high = sk->max && (sk->max_exclusive ? v >= *sk->max : v > *sk->max);
      if (low || high) {
        std::string range;
        if (sk->min) range += format_double(*sk->min) + (sk->min_exclusive ? " < " : " <= ");
        range += k;
        if (sk->max) range += (sk->max_exclusive ? " < " : " <= ") + format_double(*sk->max);
        problems.push_back(where(k) + k + " = " + e.value + " is outside the admissible range " + range);
        break;
      }
    }
  }
  for (const auto& sk : schema.keys)
    if (sk.required && !cfg.has(sk.key))
      problems.push_back(cfg.source + ": missing required key '" + sk.key + "' for " + schema.name);
  if (!problems.empty()) {
    std::string msg;
    for (const auto& p : problems) msg += (msg.empty() ? "" : "\n") + p;
    throw Error(ErrorKind::Schema, msg);
  }
}

std::string describe(const Schema& schema) {
  std::string out;
  for (const auto& k : schema.keys) {
    out += "  " + k.key + (k.required ? " (required)" : "") + ": " + k.help;
    if (k.min || k.max) {
      out += " [";
      if (k.min) out += format_double(*k.min) + (k.min_exclusive ? " < " : " <= ");
      out += "x";
      if (k.max) out += (k.max_exclusive ? " < " : " <= ") + format_double(*k.max);
      out += "]";
    }
    out += "\n";
  }
  return out;
}

ExperimentConfig experiment_config(const Config& cfg, Scenario scenario) {
  const std::string schema_name = "experiment:" + std::string(to_string(scenario));
  validate(cfg, schema_for(schema_name));
  if (cfg.has("scenario") && cfg.get_string("scenario", "") != to_string(scenario))
    throw Error(ErrorKind::Schema, "scenario: file says '" + cfg.get_string("scenario", "") + "' but '" +
                                       std::string(to_string(scenario)) + "' was requested");
  ExperimentConfig e;
  e.scenario = scenario;
  e.N = static_cast<int>(cfg.get_int("N", e.N));
  e.seed = static_cast<std::uint64_t>(cfg.get_int("seed", static_cast<long long>(e.seed)));
  e.lambda_sq = static_cast<int>(cfg.get_int("lambda_sq", e.lambda_sq));
  e.data_box = static_cast<int>(cfg.get_int("data_box", e.data_box));
  e.M0 = cfg.get_double("M0", e.M0);
  e.epsilon = cfg.get_double("epsilon", e.epsilon);
  e.eps_threshold = cfg.get_double("eps_threshold", e.eps_threshold);
  e.b = cfg.get_double("b", e.b);
  e.eps1 = cfg.get_double("eps1", e.eps1);
  e.C = cfg.get_double("C", e.C);
  e.shells = cfg.get_shells("shells");
  e.dt = cfg.get_double("dt", e.dt);
  e.record_every = static_cast<int>(cfg.get_int("record_every", e.record_every));
  e.horizon_extra = cfg.get_double("horizon_extra", e.horizon_extra);
  e.picard_steps = static_cast<int>(cfg.get_int("picard_steps", e.picard_steps));
  e.picard_tol = cfg.get_double("picard_tol", e.picard_tol);
  e.eps_scaling = cfg.get_bool("eps_scaling", e.eps_scaling);
  e.ensemble = static_cast<int>(cfg.get_int("ensemble", e.ensemble));
  e.grids = cfg.get_int_list("grids", e.grids);
  e.amplitude = cfg.get_double("amplitude", e.amplitude);
  e.lambda_sq_list = cfg.get_int_list("lambda_sq_list", e.lambda_sq_list);
  try {
    nslab::validate(e);
  } catch (const Error& err) {
    throw Error(ErrorKind::Schema, cfg.source + ": " + err.what());
  }
  return e;
}

SolverConfig solver_config(const Config& cfg) {
  SolverConfig s;
  s.dt = cfg.get_double("dt", s.dt);
  s.T = cfg.get_double("T", s.T);
  s.record_every = static_cast<int>(cfg.get_int("record_every", s.record_every));
  return s;
}

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class Reader {
 public:
  Reader(const std::string& data, const std::string& name) : data_(data), name_(name) {}
  void need(std::size_t n) const {
    if (pos_ + n > data_.size())
      throw Error(ErrorKind::TruncatedPayload, name_ + ": file ends at byte " + std::to_string(data_.size()) +
                                                   ", expected at least " + std::to_string(pos_ + n));
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(data_[pos_++]);
  }
  double f64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    pos_ += 8;
    return std::bit_cast<double>(v);
  }
  std::string bytes(std::size_t n) {
    need(n);
    std::string s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  const std::string& data_;
  std::string name_;
  std::size_t pos_ = 0;
};

constexpr std::string_view kMagic = "NSLB1";

template <class Fn>
void for_each_ordered(int N, Fn&& fn) {
  const GridIndex g{N};
  for (int a = -N / 2 + 1; a <= N / 2; ++a)
    for (int b = -N / 2 + 1; b <= N / 2; ++b)
      for (int c = -N / 2 + 1; c <= N / 2; ++c) fn(g.index({a, b, c}));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error(ErrorKind::Io, "short write to " + path.string());
}

}  // namespace

void write_snapshot(const SpectralField& f, const std::filesystem::path& path) {
  std::string out(kMagic);
  put_u32(out, static_cast<std::uint32_t>(f.grid_size()));
  put_u32(out, static_cast<std::uint32_t>(f.components()));
  out.push_back(static_cast<char>(f.is_real() ? 1 : 0));
  put_u32(out, static_cast<std::uint32_t>(f.label().size()));
  out += f.label();
  for (int c = 0; c < f.components(); ++c)
    for_each_ordered(f.grid_size(), [&](std::size_t idx) {
      put_f64(out, f(c, idx).real());
      put_f64(out, f(c, idx).imag());
    });
  write_file(path, out);
}

SpectralField read_snapshot(const std::filesystem::path& path) {
  const std::string data = read_file(path);
  const std::string name = path.string();
  if (data.size() < kMagic.size() || std::string_view(data).substr(0, kMagic.size()) != kMagic) {
    if (data.size() < kMagic.size() && kMagic.substr(0, data.size()) == data)
      throw Error(ErrorKind::TruncatedPayload, name + ": file shorter than the magic");
    throw Error(ErrorKind::BadMagic, name + ": not an NSLB1 snapshot");
  }
  Reader r(data, name);
  r.bytes(kMagic.size());
  const std::uint32_t N = r.u32();
  const std::uint32_t comps = r.u32();
  const std::uint8_t real = r.u8();
  const std::uint32_t label_len = r.u32();
  if (N < 2 || N > 4096 || N % 2 != 0 || (comps != 1 && comps != 3 && comps != 9) || real > 1)
    throw Error(ErrorKind::BadMagic, name + ": corrupt header (N=" + std::to_string(N) +
                                         ", components=" + std::to_string(comps) + ")");
  const std::string label = r.bytes(label_len);
  const std::size_t payload = static_cast<std::size_t>(comps) * N * N * N * 16;
  r.need(payload);
  SpectralField f(static_cast<int>(N), static_cast<int>(comps), real == 1, label);
  for (std::uint32_t c = 0; c < comps; ++c)
    for_each_ordered(static_cast<int>(N), [&](std::size_t idx) {
      const double re = r.f64();
      const double im = r.f64();
      f(static_cast<int>(c), idx) = Complex{re, im};
    });
  if (r.remaining() != 0) throw Error(ErrorKind::Io, name + ": " + std::to_string(r.remaining()) + " trailing bytes");
  return f;
}

std::string csv_comment(std::uint64_t config_hash) {
  return "# nslab " + std::string(kVersion) + " config_hash=" + hex64(config_hash);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::uint64_t config_hash, const std::vector<std::string>& header)
    : path_(path) {
  buffer_ = csv_comment(config_hash) + "\n";
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += cells[i];
  }
  buffer_ += '\n';
}

void CsvWriter::close() { write_file(path_, buffer_); }

std::vector<std::pair<double, Diagnostics>> diagnostics_of(const Trajectory& tr) {
  std::vector<std::pair<double, Diagnostics>> out;
  for (std::size_t k = 0; k < tr.size(); ++k) out.emplace_back(tr.time(k), tr.diagnostics()[k]);
  return out;
}

void write_diagnostics_csv(const std::filesystem::path& path, const std::vector<std::pair<double, Diagnostics>>& rows,
                           std::uint64_t config_hash) {
  CsvWriter w(path, config_hash, {"t", "energy", "enstrophy", "sup_norm", "div_residual", "analyticity_rate"});
  for (const auto& [t, d] : rows)
    w.row({format_double(t), format_double(d.energy), format_double(d.enstrophy), format_double(d.sup_norm),
           format_double(d.div_residual), format_double(d.analyticity_rate)});
  w.close();
}

void write_report(ExperimentReport& report, const std::filesystem::path& dir, std::uint64_t config_hash) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
  report.manifest.clear();

  CsvWriter rows(dir / "report.csv", config_hash, {"check", "measured", "bound", "pass"});
  for (const auto& r : report.rows)
    rows.row({r.name, format_double(r.measured), format_double(r.bound), r.pass ? "1" : "0"});
  rows.close();
  report.manifest.push_back("report.csv");

  CsvWriter summary(dir / "summary.csv", config_hash, {"key", "value"});
  for (const auto& [k, v] : report.summary) summary.row({k, format_double(v)});
  summary.close();
  report.manifest.push_back("summary.csv");

  if (!report.estimates.empty()) {
    CsvWriter est(dir / "estimates.csv", config_hash, {"estimate", "grid", "max", "mean", "drift", "finite"});
    for (const auto& e : report.estimates)
      for (std::size_t g = 0; g < e.grids.size(); ++g)
        est.row({e.name, std::to_string(e.grids[g]), format_double(e.max[g]), format_double(e.mean[g]),
                 format_double(e.drift), e.finite ? "1" : "0"});
    est.close();
    report.manifest.push_back("estimates.csv");
  }
  if (!report.diagnostics.empty()) {
    write_diagnostics_csv(dir / "diagnostics.csv", report.diagnostics, config_hash);
    report.manifest.push_back("diagnostics.csv");
  }
  for (const auto& [name, field] : report.snapshots) {
    const std::string file = name + ".nslb";
    write_snapshot(field, dir / file);
    report.manifest.push_back(file);
  }

  std::string manifest = "# nslab " + std::string(kVersion) + " config_hash=" + hex64(config_hash) + "\n";
  manifest += "scenario " + std::string(to_string(report.scenario)) + "\n";
  manifest += std::string("verdict ") + (report.passed() ? "pass" : "fail") + "\n";
  for (const auto& file : report.manifest) {
    const std::string data = read_file(dir / file);
    manifest += file + " " + std::to_string(data.size()) + " fnv1a=" + hex64(fnv1a(data)) + "\n";
  }
  write_file(dir / "manifest.txt", manifest);
  report.manifest.push_back("manifest.txt");
}

}  // namespace nslab::io
