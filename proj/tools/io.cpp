#include "io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "plap/error.hpp"

#ifndef PLAPLAB_VERSION
#define PLAPLAB_VERSION "0.0.0"
#endif

namespace plaplab {

namespace fs = std::filesystem;
using plap::InvalidArgument;

const char* tool_version() { return PLAPLAB_VERSION; }

void write_atomic(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw InvalidArgument("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string profile_csv(const plap::RadialProfile& profile) {
  std::string out = "r,u,u_r,w\n";
  out.reserve(profile.size() * 100);
  const auto r = profile.grid().nodes();
  const auto u = profile.u();
  const auto u_r = profile.u_r();
  const auto w = profile.w();
  for (std::size_t i = 0; i < profile.size(); ++i) {
    out += format_double(r[i]);
    out += ',';
    out += format_double(u[i]);
    out += ',';
    out += format_double(u_r[i]);
    out += ',';
    out += format_double(w[i]);
    out += '\n';
  }
  return out;
}

void write_profile_csv(const fs::path& path, const plap::RadialProfile& profile) {
  write_atomic(path, profile_csv(profile));
}

plap::RadialProfile read_profile_csv(const fs::path& path, double n, double p) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open profile '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line != "r,u,u_r,w") {
    throw InvalidArgument("profile '" + path.string() + "' must start with header r,u,u_r,w");
  }
  std::vector<double> r, u, u_r, w;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    double values[4];
    int count = 0;
    while (std::getline(row, cell, ',')) {
      if (count == 4) {
        throw InvalidArgument("profile '" + path.string() + "': expected 4 columns");
      }
      char* end = nullptr;
      values[count] = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0') {
        throw InvalidArgument("profile '" + path.string() + "': bad number '" + cell + "'");
      }
      ++count;
    }
    if (count != 4) {
      throw InvalidArgument("profile '" + path.string() + "': expected 4 columns");
    }
    r.push_back(values[0]);
    u.push_back(values[1]);
    u_r.push_back(values[2]);
    w.push_back(values[3]);
  }
  if (r.size() < plap::kMinGridNodes) {
    throw InvalidArgument("profile '" + path.string() + "' has too few rows");
  }
  auto grid = plap::make_grid(r.front(), r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (grid[i] != r[i]) {
      throw InvalidArgument("profile '" + path.string() + "': radii are not a log-spaced grid");
    }
  }
  return plap::RadialProfile::from_fields(std::move(grid), n, p, std::move(u), std::move(w),
                                          std::move(u_r));
}

Json to_json(const plap::ExtendedReal& value) {
  if (value.is_finite()) return value.value();
  return "inf";
}

Json report_header(std::string_view command, const Json& config) {
  Json out;
  out["schema"] = 1;
  out["tool"] = "plaplab";
  out["version"] = tool_version();
  out["command"] = command;
  out["config"] = config;
  return out;
}

void write_json(const fs::path& path, const Json& report) {
  write_atomic(path, report.dump(2) + "\n");
}

}  // namespace plaplab
