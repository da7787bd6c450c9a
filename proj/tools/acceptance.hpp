#pragma once

// The acceptance criteria as runnable checks, shared by `plaplab verify`
// and the acceptance test binary.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace plaplab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

inline constexpr int kCriterionCount = 13;

/// Runs criterion `id` (1..13). Never throws: errors are failures with the
/// message in `detail`. `scratch` is a writable directory for criteria that
/// produce files.
CriterionResult run_criterion(int id, const std::filesystem::path& scratch);

std::string criterion_name(int id);

/// Criteria exercised by a verify preset: gelfand-disk, supercritical-exp,
/// power-critical. InvalidArgument for other names.
std::vector<int> preset_criteria(std::string_view preset);

}  // namespace plaplab
