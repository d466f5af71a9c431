#pragma once

#include <map>
#include <string>
#include <vector>

#include "cavkin/config.hpp"

namespace cavkin {

inline constexpr const char* version_string = "0.3.0";

struct ArtifactEntry {
  std::string file;  // relative to the scenario output directory
  std::string sha256;
  std::size_t bytes = 0;
};

struct ResultManifest {
  std::string scenario;
  std::string version;
  std::string config_hash;
  std::string config_snapshot;
  bool cache_hit = false;
  std::vector<ArtifactEntry> artifacts;
  std::vector<std::string> failures;
  std::map<std::string, double> timings_s;

  [[nodiscard]] bool ok() const { return failures.empty(); }
  [[nodiscard]] std::string to_json() const;
};

struct ScenarioOptions {
  std::string out_dir = "results";
  bool use_cache = true;
  std::string cache_dir;  // default: <out_dir>/.cache
};

[[nodiscard]] const std::vector<std::string>& scenario_names();

// Runs one pipeline and writes its CSV files plus manifest.json into
// <out_dir>/<name>/. Unknown names raise ConfigError. Errors inside a pipeline
// are recorded in the manifest failures.
ResultManifest run_scenario(const std::string& name, const RunConfig& cfg, const ScenarioOptions& opt);

[[nodiscard]] std::string sha256_hex(const std::string& data);
[[nodiscard]] std::string sha256_file(const std::string& path);

// Pipelines shared with the CLI and the acceptance checks.
struct Table2Row {
  double eta = 0.0;
  double beta_cm = 0.0;
  double ln_k_ave = 0.0;
  double ln_k = 0.0;
};

// The unaveraged CRP curve of each eta is appended to `curves` when given.
[[nodiscard]] std::vector<Table2Row> compute_table2(const RunConfig& cfg, std::vector<CrpCurve>* curves = nullptr);
[[nodiscard]] CrpCurve compute_crp_curve(const RunConfig& cfg, const ModelParams& p);

}  // namespace cavkin
