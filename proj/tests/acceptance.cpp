// Runs every acceptance criterion and prints one line per criterion.
// Exit status is 0 only if all pass.

#include <cstdio>
#include <filesystem>

#include "acceptance.hpp"

int main(int argc, char** argv) {
  const std::filesystem::path scratch =
      argc > 1 ? std::filesystem::path(argv[1]) : std::filesystem::temp_directory_path() /
                                                      "plaplab-acceptance";
  std::filesystem::create_directories(scratch);
  int failed = 0;
  for (int id = 1; id <= plaplab::kCriterionCount; ++id) {
    const auto r = plaplab::run_criterion(id, scratch);
    std::printf("[%s] %2d %-26s %7.2fs  %s\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.seconds, r.detail.c_str());
    std::fflush(stdout);
    if (!r.passed) ++failed;
  }
  std::printf("%d/%d criteria passed\n", plaplab::kCriterionCount - failed,
              plaplab::kCriterionCount);
  return failed == 0 ? 0 : 1;
}
