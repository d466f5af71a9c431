#pragma once

#include <map>
#include <string>
#include <vector>

#include "cavkin/cap.hpp"
#include "cavkin/crp.hpp"
#include "cavkin/dynamics.hpp"
#include "cavkin/grid.hpp"
#include "cavkin/model.hpp"

namespace cavkin {

// Flat key = value configuration. Every key has an embedded default; a config
// file or APP_* environment variables override them. The environment name of a
// key is APP_ followed by the key upper-cased with '.' replaced by '_', e.g.
// APP_COUPLING_ETA for coupling.eta. Lists are comma separated.
class RunConfig {
 public:
  RunConfig();

  static RunConfig from_file(const std::string& path);
  static RunConfig from_string(const std::string& text);

  // Throws ConfigError for unknown keys.
  void set(const std::string& key, const std::string& value);
  void apply_environment();
  void apply_environment(const std::map<std::string, std::string>& env);

  [[nodiscard]] bool has(const std::string& key) const { return values_.count(key) != 0; }
  [[nodiscard]] const std::string& raw(const std::string& key) const;
  [[nodiscard]] double number(const std::string& key) const;
  [[nodiscard]] long integer(const std::string& key) const;
  [[nodiscard]] bool flag(const std::string& key) const;
  [[nodiscard]] std::vector<double> numbers(const std::string& key) const;

  // Sorted "key = value" lines; parsing it back gives an identical config.
  [[nodiscard]] std::string snapshot() const;
  [[nodiscard]] const std::map<std::string, std::string>& values() const { return values_; }

  [[nodiscard]] ModelParams model() const;
  [[nodiscard]] CapConfig cap() const;
  [[nodiscard]] CrpSettings crp_settings() const;
  [[nodiscard]] Grid2D crp_grid(const ModelParams& p) const;
  [[nodiscard]] Grid1D eigen_grid(const ModelParams& p) const;
  [[nodiscard]] ScanOptions dynamics_options() const;

  static std::string environment_name(const std::string& key);

 private:
  std::map<std::string, std::string> values_;
};

// Every violated invariant, each naming the offending key(s). Never throws.
[[nodiscard]] std::vector<std::string> validate_config(const RunConfig& cfg);

}  // namespace cavkin
