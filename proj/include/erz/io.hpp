#pragma once
//
// Config files, CSV time series, binary checkpoints and run manifests.
//

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "erz/config.hpp"
#include "erz/diagnostics.hpp"
#include "erz/dynamics.hpp"

namespace erz {

/// `key = value` lines with `#` comments. Throws ConfigError naming the key.
SimConfig parse_config(const std::string& text);
SimConfig load_config(const std::string& path);
/// Canonical text form: every key, fixed order, 17 significant digits.
std::string dump_config(const SimConfig& cfg);

std::string csv_header();
std::string format_double(double v);

/// Incremental CSV writer; the header is written on construction.
class TimeSeriesWriter {
 public:
  explicit TimeSeriesWriter(const std::string& path);
  void append(const DiagnosticsRecord& r);
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
};

void write_timeseries(const std::vector<DiagnosticsRecord>& series, const std::string& path);
/// Throws FormatError on header or row mismatch.
std::vector<DiagnosticsRecord> read_timeseries(const std::string& path);

void checkpoint(const State& s, const std::string& path);
/// Throws CorruptCheckpointError on bad magic or size mismatch.
State restore(const std::string& path);

struct RunManifest {
  std::string config_text;
  std::string code_version;
  std::uint64_t seed = 0;
  std::string start_time;
  std::string end_time;
  std::string status;  // running | completed | blow-up | error
  double final_time = 0.0;
  std::string message;
  std::vector<std::string> outputs;
};

std::string code_version();
std::string utc_timestamp();
void write_manifest(const RunManifest& m, const std::string& path);
RunManifest read_manifest(const std::string& path);

}  // namespace erz
