#include "erz/io.hpp"

#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "erz/errors.hpp"

namespace erz {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw ConfigError(key, "expected a real number, got '" + v + "'");
  return out;
}

long long parse_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw ConfigError(key, "expected an integer, got '" + v + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key, "expected true or false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

using Setter = std::function<void(SimConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"dimension", [](SimConfig& c, auto& k, auto& v) { c.dimension = static_cast<int>(parse_int(k, v)); }},
      {"points_per_axis", [](SimConfig& c, auto& k, auto& v) { c.points_per_axis = static_cast<int>(parse_int(k, v)); }},
      {"box_length", [](SimConfig& c, auto& k, auto& v) { c.box_length = parse_double(k, v); }},
      {"alpha", [](SimConfig& c, auto& k, auto& v) { c.physics.alpha = parse_double(k, v); }},
      {"gamma", [](SimConfig& c, auto& k, auto& v) { c.physics.gamma = parse_double(k, v); }},
      {"lambda", [](SimConfig& c, auto& k, auto& v) { c.physics.lambda = parse_double(k, v); }},
      {"background", [](SimConfig& c, auto& k, auto& v) { c.physics.background = parse_double(k, v); }},
      {"m_index", [](SimConfig& c, auto& k, auto& v) { c.m_index = static_cast<int>(parse_int(k, v)); }},
      {"s_neg", [](SimConfig& c, auto& k, auto& v) { c.s_neg = parse_double(k, v); }},
      {"eta1", [](SimConfig& c, auto& k, auto& v) { c.eta1 = parse_double(k, v); }},
      {"eta2", [](SimConfig& c, auto& k, auto& v) { c.eta2 = parse_double(k, v); }},
      {"eta4", [](SimConfig& c, auto& k, auto& v) { c.eta4 = parse_double(k, v); }},
      {"sigma", [](SimConfig& c, auto& k, auto& v) { c.sigma = parse_double(k, v); }},
      {"scheme", [](SimConfig& c, auto&, auto& v) { c.scheme = parse_scheme(v); }},
      {"dt", [](SimConfig& c, auto& k, auto& v) { c.dt = parse_double(k, v); }},
      {"t_end", [](SimConfig& c, auto& k, auto& v) { c.t_end = parse_double(k, v); }},
      {"output_every", [](SimConfig& c, auto& k, auto& v) { c.output_every = static_cast<int>(parse_int(k, v)); }},
      {"checkpoint_every", [](SimConfig& c, auto& k, auto& v) { c.checkpoint_every = static_cast<int>(parse_int(k, v)); }},
      {"dealias", [](SimConfig& c, auto& k, auto& v) { c.dealias = parse_bool(k, v); }},
      {"density_floor", [](SimConfig& c, auto& k, auto& v) { c.density_floor = parse_double(k, v); }},
      {"scenario", [](SimConfig& c, auto&, auto& v) { c.scenario = v; }},
      {"ic_amplitude", [](SimConfig& c, auto& k, auto& v) { c.ic_amplitude = parse_double(k, v); }},
      {"ic_seed", [](SimConfig& c, auto& k, auto& v) {
         const long long s = parse_int(k, v);
         if (s < 0) throw ConfigError(k, "must be >= 0");
         c.ic_seed = static_cast<std::uint64_t>(s);
       }},
      {"ic_width", [](SimConfig& c, auto& k, auto& v) { c.ic_width = parse_double(k, v); }},
      {"ic_mode", [](SimConfig& c, auto& k, auto& v) {
         c.ic_mode.clear();
         for (const auto& item : split_list(v)) c.ic_mode.push_back(static_cast<int>(parse_int(k, item)));
       }},
      {"ic_mean_velocity", [](SimConfig& c, auto& k, auto& v) {
         c.ic_mean_velocity.clear();
         for (const auto& item : split_list(v)) c.ic_mean_velocity.push_back(parse_double(k, item));
       }},
      {"ic_bump_width", [](SimConfig& c, auto& k, auto& v) { c.ic_bump_width = parse_double(k, v); }},
      {"output_path", [](SimConfig& c, auto&, auto& v) { c.output_path = v; }},
  };
  return table;
}

template <class T>
void put_le(std::string& out, T v) {
  static_assert(sizeof(T) == 4 || sizeof(T) == 8);
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  U bits = std::bit_cast<U>(v);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>(bits & 0xffu));
    bits >>= 8;
  }
}

template <class T>
T get_le(const std::string& in, std::size_t& pos) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    bits |= static_cast<U>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  pos += sizeof(T);
  return std::bit_cast<T>(bits);
}

constexpr char kMagic[8] = {'E', 'R', 'Z', 'C', 'K', 'P', 'T', '1'};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& data) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(tmp, "cannot open for writing");
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw IoError(tmp, "write failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError(path, "rename failed: " + ec.message());
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + items[i];
  return out;
}

}  // namespace

SimConfig parse_config(const std::string& text) {
  SimConfig c;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno), "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(key, "unknown key");
    if (!seen.insert(key).second) throw ConfigError(key, "duplicate key");
    if (value.empty()) throw ConfigError(key, "empty value");
    it->second(c, key, value);
  }
  for (const char* req : {"dimension", "points_per_axis", "box_length", "alpha", "dt", "t_end", "scenario"})
    if (!seen.count(req)) throw ConfigError(req, "missing required key");
  if (!seen.count("s_neg")) c.s_neg = c.physics.alpha / 2;
  if (!seen.count("eta4")) c.eta4 = c.eta1;
  validate(c);
  return c;
}

SimConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump_config(const SimConfig& c) {
  std::vector<std::pair<std::string, std::string>> kv = {
      {"dimension", std::to_string(c.dimension)},
      {"points_per_axis", std::to_string(c.points_per_axis)},
      {"box_length", format_double(c.box_length)},
      {"alpha", format_double(c.physics.alpha)},
      {"gamma", format_double(c.physics.gamma)},
      {"lambda", format_double(c.physics.lambda)},
      {"background", format_double(c.physics.background)},
      {"m_index", std::to_string(c.m_index)},
      {"s_neg", format_double(c.s_neg)},
      {"eta1", format_double(c.eta1)},
      {"eta2", format_double(c.eta2)},
      {"eta4", format_double(c.eta4)},
      {"sigma", format_double(c.sigma)},
      {"scheme", to_string(c.scheme)},
      {"dt", format_double(c.dt)},
      {"t_end", format_double(c.t_end)},
      {"output_every", std::to_string(c.output_every)},
      {"checkpoint_every", std::to_string(c.checkpoint_every)},
      {"dealias", c.dealias ? "true" : "false"},
      {"density_floor", format_double(c.density_floor)},
      {"scenario", c.scenario},
      {"ic_amplitude", format_double(c.ic_amplitude)},
      {"ic_seed", std::to_string(c.ic_seed)},
      {"ic_width", format_double(c.ic_width)},
  };
  if (!c.ic_mode.empty()) {
    std::vector<std::string> items;
    for (int m : c.ic_mode) items.push_back(std::to_string(m));
    kv.emplace_back("ic_mode", join(items));
  }
  if (!c.ic_mean_velocity.empty()) {
    std::vector<std::string> items;
    for (double v : c.ic_mean_velocity) items.push_back(format_double(v));
    kv.emplace_back("ic_mean_velocity", join(items));
  }
  kv.emplace_back("ic_bump_width", format_double(c.ic_bump_width));
  kv.emplace_back("output_path", c.output_path);
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

std::string csv_header() {
  std::vector<std::string> names;
  for (const char* n : DiagnosticsRecord::column_names()) names.emplace_back(n);
  return join(names);
}

namespace {

std::string csv_row(const DiagnosticsRecord& r) {
  std::vector<std::string> items;
  for (double v : r.columns()) items.push_back(format_double(v));
  return join(items);
}

}  // namespace

TimeSeriesWriter::TimeSeriesWriter(const std::string& path) : path_(path), out_(path, std::ios::trunc) {
  if (!out_) throw IoError(path, "cannot open for writing");
  out_ << csv_header() << '\n';
  out_.flush();
  if (!out_) throw IoError(path, "write failed");
}

void TimeSeriesWriter::append(const DiagnosticsRecord& r) {
  out_ << csv_row(r) << '\n';
  out_.flush();
  if (!out_) throw IoError(path_, "write failed");
}

void write_timeseries(const std::vector<DiagnosticsRecord>& series, const std::string& path) {
  TimeSeriesWriter w(path);
  for (const auto& r : series) w.append(r);
}

std::vector<DiagnosticsRecord> read_timeseries(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open for reading");
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path + ": empty file, expected a header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != csv_header()) throw FormatError(path + ": header mismatch");
  std::vector<DiagnosticsRecord> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto items = split_list(line);
    if (items.size() != DiagnosticsRecord::column_count)
      throw FormatError(path + ":" + std::to_string(lineno) + ": expected " +
                        std::to_string(DiagnosticsRecord::column_count) + " fields");
    std::array<double, DiagnosticsRecord::column_count> vals{};
    for (std::size_t i = 0; i < items.size(); ++i) {
      char* end = nullptr;
      vals[i] = std::strtod(items[i].c_str(), &end);
      if (items[i].empty() || end != items[i].c_str() + items[i].size())
        throw FormatError(path + ":" + std::to_string(lineno) + ": bad number '" + items[i] + "'");
    }
    out.push_back(DiagnosticsRecord::from_columns(vals));
  }
  return out;
}

void checkpoint(const State& s, const std::string& path) {
  const Grid& g = *s.grid();
  std::string buf(kMagic, kMagic + 8);
  put_le(buf, static_cast<std::uint32_t>(g.dim()));
  put_le(buf, static_cast<std::uint32_t>(g.points()));
  for (double v : {g.length(), s.params.alpha, s.params.gamma, s.params.lambda, s.params.background, s.t})
    put_le(buf, v);
  for (double v : s.h.values()) put_le(buf, v);
  for (const auto& c : s.u)
    for (double v : c.values()) put_le(buf, v);
  write_file_atomic(path, buf);
}

State restore(const std::string& path) {
  const std::string data = read_file(path);
  constexpr std::size_t head = 8 + 4 + 4 + 6 * 8;
  if (data.size() < head) throw CorruptCheckpointError(path + ": truncated header");
  if (std::memcmp(data.data(), kMagic, 8) != 0) throw CorruptCheckpointError(path + ": bad magic");
  std::size_t pos = 8;
  const auto d = get_le<std::uint32_t>(data, pos);
  const auto n = get_le<std::uint32_t>(data, pos);
  PhysicsParams p;
  const double L = get_le<double>(data, pos);
  p.alpha = get_le<double>(data, pos);
  p.gamma = get_le<double>(data, pos);
  p.lambda = get_le<double>(data, pos);
  p.background = get_le<double>(data, pos);
  const double t = get_le<double>(data, pos);
  if (d < 1 || d > 8 || n < 4 || n % 2 != 0 || n > (1u << 16))
    throw CorruptCheckpointError(path + ": implausible grid header");
  std::size_t count = 1;
  for (std::uint32_t a = 0; a < d; ++a) {
    count *= n;
    if (count > (std::size_t{1} << 34)) throw CorruptCheckpointError(path + ": implausible grid size");
  }
  if (data.size() != head + (d + 1) * count * 8)
    throw CorruptCheckpointError(path + ": size mismatch (expected " +
                                 std::to_string(head + (d + 1) * count * 8) + " bytes, got " +
                                 std::to_string(data.size()) + ")");
  GridPtr grid;
  try {
    grid = Grid::make(static_cast<int>(d), static_cast<int>(n), L);
  } catch (const ConfigError& e) {
    throw CorruptCheckpointError(path + ": " + e.what());
  }
  State s = zero_state(grid, p);
  s.t = t;
  for (double& v : s.h.values()) v = get_le<double>(data, pos);
  for (auto& c : s.u)
    for (double& v : c.values()) v = get_le<double>(data, pos);
  return s;
}

std::string code_version() { return "erz 0.1.0"; }

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const RunManifest& m, const std::string& path) {
  nlohmann::ordered_json j;
  j["status"] = m.status;
  j["code_version"] = m.code_version;
  j["seed"] = m.seed;
  j["start_time"] = m.start_time;
  j["end_time"] = m.end_time;
  j["final_time"] = m.final_time;
  j["message"] = m.message;
  j["outputs"] = m.outputs;
  j["momentum_normalization"] = "mc = (integral of rho u) / (integral of rho)";
  j["config"] = m.config_text;
  write_file_atomic(path, j.dump(2) + "\n");
}

RunManifest read_manifest(const std::string& path) {
  const std::string text = read_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
  RunManifest m;
  try {
    m.status = j.at("status").get<std::string>();
    m.code_version = j.at("code_version").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.start_time = j.at("start_time").get<std::string>();
    m.end_time = j.at("end_time").get<std::string>();
    m.final_time = j.at("final_time").get<double>();
    m.message = j.at("message").get<std::string>();
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    m.config_text = j.at("config").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
  return m;
}

}  // namespace erz
