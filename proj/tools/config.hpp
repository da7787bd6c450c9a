#pragma once

// Run configuration: a fixed table of section.key entries with defaults,
// filled from an INI file and then from command-line overrides. Unknown
// keys are errors.

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "plap/core.hpp"
#include "plap/solver.hpp"
#include "plap/stability.hpp"

namespace plaplab {

struct KeyInfo {
  std::string key;
  std::string default_value;
  std::string help;
};

/// Every accepted key, in report order.
const std::vector<KeyInfo>& known_keys();

class RunConfig {
 public:
  RunConfig();

  /// Reads [section] key = value lines. Throws plap::InvalidArgument naming
  /// the first unknown key or unreadable file.
  void load_ini(const std::string& path);
  /// "section.key=value".
  void apply_assignment(const std::string& assignment);
  void set(const std::string& key, const std::string& value);

  [[nodiscard]] const std::string& get(const std::string& key) const;
  [[nodiscard]] double get_double(const std::string& key) const;
  [[nodiscard]] std::size_t get_size(const std::string& key) const;
  /// Comma-separated doubles; empty string gives an empty list.
  [[nodiscard]] std::vector<double> get_list(const std::string& key) const;

  /// Nested {section: {key: value}} with every resolved value as text.
  [[nodiscard]] nlohmann::ordered_json to_json() const;

  // Typed views.
  [[nodiscard]] plap::ProblemSpec problem() const;
  [[nodiscard]] plap::RadialGrid grid() const;
  [[nodiscard]] plap::IterationControls iteration() const;
  [[nodiscard]] plap::LambdaControls lambda_controls() const;
  [[nodiscard]] plap::BoundaryControls boundary_controls() const;
  [[nodiscard]] plap::StabilityControls stability() const;

 private:
  std::map<std::string, std::string> values_;
};

/// Reads a tabulated nonlinearity: CSV with header t,f,f_prime[,F].
std::vector<plap::TableNode> read_table(const std::string& path);

}  // namespace plaplab
