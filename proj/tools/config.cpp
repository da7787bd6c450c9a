#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "plap/exponents.hpp"

namespace plaplab {

using plap::InvalidArgument;

const std::vector<KeyInfo>& known_keys() {
  static const std::vector<KeyInfo> keys = {
      {"problem.n", "2", "dimension n (real, >= 1)"},
      {"problem.p", "2", "exponent p > 1"},
      {"problem.nonlinearity", "exponential", "exponential | power | tabulated"},
      {"problem.lambda", "1", "parameter lambda in g = lambda f"},
      {"problem.m", "5", "power exponent m, or 'mcs' for m_cs(n, p)"},
      {"problem.table", "", "CSV with header t,f,f_prime[,F] for tabulated f"},
      {"grid.r_min", "1e-8", "smallest grid radius"},
      {"grid.N", "2000", "number of grid nodes"},
      {"solver.tol_abs", "1e-12", "monotone iteration absolute tolerance"},
      {"solver.tol_rel", "1e-12", "monotone iteration relative tolerance"},
      {"solver.u_max", "1e6", "divergence threshold on sup u"},
      {"solver.k_max", "10000", "iteration cap"},
      {"solver.lambda_start", "1", "first lambda tried by the lambda* search"},
      {"solver.lambda_cap", "1e8", "largest lambda tried before giving up"},
      {"solver.tol_lambda", "1e-3", "relative width of the final lambda* bracket"},
      {"solver.boundary_tol", "1e-8", "shooting: |u(1)| < tol * M"},
      {"solver.secant_max", "60", "shooting: secant iterations per centre value"},
      {"stability.r_trunc", "1e-6", "inner truncation radius of test functions"},
      {"stability.n_eig", "512", "number of P1 cells"},
      {"stability.tol_eig", "1e-8", "verdict tolerance relative to the mass scale"},
      {"stability.source", "minimal", "minimal | exact | file"},
      {"stability.profile", "", "profile CSV when source = file"},
      {"bifurcate.m_min", "0.1", "smallest centre value"},
      {"bifurcate.m_max", "5", "largest centre value"},
      {"bifurcate.count", "50", "number of centre values"},
      {"bifurcate.spacing", "linear", "linear | log"},
      {"verify.preset", "gelfand-disk", "gelfand-disk | supercritical-exp | power-critical"},
      {"sweep.command", "lambda-star", "per-point command: exponents | solve | lambda-star | stability"},
      {"sweep.n", "", "comma-separated n values (empty: problem.n)"},
      {"sweep.p", "", "comma-separated p values (empty: problem.p)"},
      {"sweep.lambda", "", "comma-separated lambda values (empty: problem.lambda)"},
      {"output.dir", "plaplab-out", "output directory"},
      {"output.formats", "json,csv", "json and/or csv"},
  };
  return keys;
}

RunConfig::RunConfig() {
  for (const auto& k : known_keys()) values_[k.key] = k.default_value;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  auto it = values_.find(key);
  if (it == values_.end()) throw InvalidArgument("unknown config key '" + key + "'");
  it->second = value;
}

void RunConfig::apply_assignment(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw InvalidArgument("override '" + assignment + "' is not of the form section.key=value");
  }
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
  };
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void RunConfig::load_ini(const std::string& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw InvalidArgument("cannot read config '" + path + "': " + e.message());
  }
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      throw InvalidArgument("config key '" + section + "' is outside any [section]");
    }
    for (const auto& [key, value] : body) set(section + "." + key, value.data());
  }
}

const std::string& RunConfig::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw InvalidArgument("unknown config key '" + key + "'");
  return it->second;
}

namespace {

double parse_double(const std::string& text, const std::string& key) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && last[-1] == ' ') --last;
  if (first < last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || first == last) {
    throw InvalidArgument("config key '" + key + "': '" + text + "' is not a number");
  }
  return value;
}

}  // namespace

double RunConfig::get_double(const std::string& key) const { return parse_double(get(key), key); }

std::size_t RunConfig::get_size(const std::string& key) const {
  const double v = get_double(key);
  if (!(v >= 0.0) || v != std::floor(v) || v > 1e15) {
    throw InvalidArgument("config key '" + key + "' must be a nonnegative integer");
  }
  return static_cast<std::size_t>(v);
}

std::vector<double> RunConfig::get_list(const std::string& key) const {
  std::vector<double> out;
  std::stringstream stream(get(key));
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(parse_double(item, key));
  }
  return out;
}

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const auto& k : known_keys()) {
    const auto dot = k.key.find('.');
    out[k.key.substr(0, dot)][k.key.substr(dot + 1)] = values_.at(k.key);
  }
  return out;
}

plap::ProblemSpec RunConfig::problem() const {
  const double n = get_double("problem.n");
  const double p = get_double("problem.p");
  const double lambda = get_double("problem.lambda");
  const std::string& kind = get("problem.nonlinearity");
  plap::ProblemSpec spec{n, p};
  spec.validate();
  if (kind == "exponential") {
    spec.nonlinearity = plap::Nonlinearity::exponential(lambda);
  } else if (kind == "power") {
    const std::string& m_text = get("problem.m");
    const double m = m_text == "mcs" ? plap::m_cs(n, p).value() : get_double("problem.m");
    spec.nonlinearity = plap::Nonlinearity::power(m, lambda);
  } else if (kind == "tabulated") {
    const std::string& table = get("problem.table");
    if (table.empty()) throw InvalidArgument("problem.table is required for tabulated f");
    spec.nonlinearity = plap::Nonlinearity::tabulated(read_table(table), lambda);
  } else {
    throw InvalidArgument("problem.nonlinearity must be exponential, power or tabulated");
  }
  return spec;
}

plap::RadialGrid RunConfig::grid() const {
  return plap::make_grid(get_double("grid.r_min"), get_size("grid.N"));
}

plap::IterationControls RunConfig::iteration() const {
  plap::IterationControls c;
  c.tol_abs = get_double("solver.tol_abs");
  c.tol_rel = get_double("solver.tol_rel");
  c.u_max = get_double("solver.u_max");
  c.k_max = get_size("solver.k_max");
  return c;
}

plap::LambdaControls RunConfig::lambda_controls() const {
  plap::LambdaControls c;
  c.lambda_start = get_double("solver.lambda_start");
  c.lambda_cap = get_double("solver.lambda_cap");
  c.tol_lambda = get_double("solver.tol_lambda");
  c.iteration = iteration();
  return c;
}

plap::BoundaryControls RunConfig::boundary_controls() const {
  plap::BoundaryControls c;
  c.tol = get_double("solver.boundary_tol");
  c.max_iterations = get_size("solver.secant_max");
  return c;
}

plap::StabilityControls RunConfig::stability() const {
  plap::StabilityControls c;
  c.r_trunc = get_double("stability.r_trunc");
  c.n_eig = get_size("stability.n_eig");
  c.tol_eig = get_double("stability.tol_eig");
  return c;
}

std::vector<plap::TableNode> read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open table '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("table '" + path + "' is empty");
  const bool has_antiderivative = line.find(",F") != std::string::npos;
  if (line.rfind("t,f,f_prime", 0) != 0) {
    throw InvalidArgument("table '" + path + "' must start with header t,f,f_prime[,F]");
  }
  std::vector<plap::TableNode> nodes;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> cells;
    std::stringstream stream(line);
    std::string item;
    while (std::getline(stream, item, ',')) cells.push_back(parse_double(item, path));
    const std::size_t expected = has_antiderivative ? 4 : 3;
    if (cells.size() != expected) throw InvalidArgument("table '" + path + "' has a malformed row");
    plap::TableNode node{cells[0], cells[1], cells[2], std::nullopt};
    if (has_antiderivative) node.antiderivative = cells[3];
    nodes.push_back(node);
  }
  return nodes;
}

}  // namespace plaplab
