#include "gfbm/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#define TOML_EXCEPTIONS 0
#include <toml.hpp>

#include "gfbm/error.hpp"

namespace gfbm {

namespace {

class Problems {
 public:
  explicit Problems(std::string source) : source_(std::move(source)) {}
  void add(const std::string& message) { list_.push_back(message); }
  void add(const toml::source_region& at, const std::string& message) {
    list_.push_back(source_ + ":" + std::to_string(at.begin.line) + ": " + message);
  }
  void raise_if_any() const {
    if (list_.empty()) return;
    std::string text = "invalid configuration (" + std::to_string(list_.size()) + " problem" +
                       (list_.size() == 1 ? "" : "s") + "):";
    for (const auto& p : list_) text += "\n  - " + p;
    throw ConfigError(text);
  }

 private:
  std::string source_;
  std::vector<std::string> list_;
};

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"density",
       {"kind", "hurst", "expression", "table", "b", "K", "K_prime", "tail", "tail_parameter"}},
      {"quad", {"tol", "max_refinements"}},
      {"grid", {"t_min", "t_max", "dt", "points"}},
      {"simulation", {"convention", "truncation", "n_paths", "seed"}},
      {"kernel", {"methods", "parseval_n"}},
      {"tm", {"target", "t", "k"}},
      {"output", {"dir", "cache"}}};
  return s;
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s = buf;
  if (s == "inf") return "inf";
  if (s == "-inf") return "-inf";
  if (s == "nan" || s == "-nan") return "nan";
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::string quote(const std::string& s) {
  std::ostringstream out;
  out << toml::value<std::string>(s);
  return out.str();
}

// Reads one key, recording type problems instead of throwing.
struct Reader {
  Problems& problems;
  const toml::table& section;
  std::string name;

  const toml::node* find(const std::string& key) const { return section.get(key); }
  std::string where(const std::string& key) const { return name + "." + key; }

  void number(const std::string& key, double& out) {
    const auto* n = find(key);
    if (!n) return;
    if (auto v = n->value<double>(); v && (n->is_floating_point() || n->is_integer())) {
      out = *v;
    } else {
      problems.add(n->source(), where(key) + ": expected a number");
    }
  }
  void integer(const std::string& key, int& out) {
    const auto* n = find(key);
    if (!n) return;
    const auto v = n->as_integer();
    if (!v || v->get() < std::numeric_limits<int>::min() || v->get() > std::numeric_limits<int>::max()) {
      problems.add(n->source(), where(key) + ": expected an integer");
      return;
    }
    out = static_cast<int>(v->get());
  }
  // Unsigned 64-bit values above INT64_MAX are written as quoted decimal strings.
  void unsigned64(const std::string& key, std::uint64_t& out) {
    const auto* n = find(key);
    if (!n) return;
    if (const auto v = n->as_integer()) {
      if (v->get() < 0) {
        problems.add(n->source(), where(key) + ": must be >= 0");
        return;
      }
      out = static_cast<std::uint64_t>(v->get());
      return;
    }
    if (const auto s = n->as_string()) {
      const std::string& text = s->get();
      std::uint64_t parsed = 0;
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), parsed);
      if (ec == std::errc() && ptr == text.data() + text.size() && !text.empty()) {
        out = parsed;
        return;
      }
    }
    problems.add(n->source(), where(key) + ": expected an unsigned 64-bit integer");
  }
  void string(const std::string& key, std::string& out) {
    const auto* n = find(key);
    if (!n) return;
    if (const auto s = n->as_string()) {
      out = s->get();
    } else {
      problems.add(n->source(), where(key) + ": expected a quoted string");
    }
  }
  bool numbers(const std::string& key, std::vector<double>& out) {
    const auto* n = find(key);
    if (!n) return false;
    const auto* arr = n->as_array();
    if (!arr) {
      problems.add(n->source(), where(key) + ": expected an array of numbers");
      return false;
    }
    out.clear();
    for (const auto& item : *arr) {
      const auto v = item.value<double>();
      if (!v || !(item.is_floating_point() || item.is_integer())) {
        problems.add(item.source(), where(key) + ": array entries must be numbers");
        return false;
      }
      out.push_back(*v);
    }
    return true;
  }
  bool strings(const std::string& key, std::vector<std::string>& out) {
    const auto* n = find(key);
    if (!n) return false;
    const auto* arr = n->as_array();
    if (!arr) {
      problems.add(n->source(), where(key) + ": expected an array of strings");
      return false;
    }
    out.clear();
    for (const auto& item : *arr) {
      const auto s = item.as_string();
      if (!s) {
        problems.add(item.source(), where(key) + ": array entries must be quoted strings");
        return false;
      }
      out.push_back(s->get());
    }
    return true;
  }
};

void read_sections(const toml::table& root, RunConfig& c, Problems& problems) {
  for (const auto& [key, node] : root) {
    const std::string name(key.str());
    const auto it = schema().find(name);
    if (it == schema().end()) {
      problems.add(node.source(), "unknown section [" + name + "]");
      continue;
    }
    const auto* table = node.as_table();
    if (!table) {
      problems.add(node.source(), "'" + name + "' must be a [section]");
      continue;
    }
    for (const auto& [inner, value] : *table) {
      if (!it->second.contains(std::string(inner.str()))) {
        problems.add(value.source(),
                     "unknown key '" + std::string(inner.str()) + "' in section [" + name + "]");
      }
    }
  }

  auto section = [&](const char* name) -> const toml::table* { return root[name].as_table(); };
  static const toml::table kEmpty;

  {
    Reader r{problems, section("density") ? *section("density") : kEmpty, "density"};
    auto& d = c.density;
    r.string("kind", d.kind);
    r.number("hurst", d.hurst);
    r.string("expression", d.expression);
    r.string("table", d.table);
    r.number("b", d.b);
    r.number("K", d.K);
    r.number("K_prime", d.K_prime);
    r.string("tail", d.tail);
    r.number("tail_parameter", d.tail_parameter);
  }
  {
    Reader r{problems, section("quad") ? *section("quad") : kEmpty, "quad"};
    r.number("tol", c.quad_tol);
    r.integer("max_refinements", c.max_refinements);
  }
  {
    Reader r{problems, section("grid") ? *section("grid") : kEmpty, "grid"};
    r.number("t_min", c.t_min);
    r.number("t_max", c.t_max);
    r.number("dt", c.dt);
    std::vector<double> pts;
    if (r.numbers("points", pts)) c.points = pts;
  }
  {
    Reader r{problems, section("simulation") ? *section("simulation") : kEmpty, "simulation"};
    std::string convention;
    r.string("convention", convention);
    if (!convention.empty()) {
      try {
        c.convention = convention_from_string(convention);
      } catch (const std::exception& e) {
        problems.add(std::string("simulation.convention: ") + e.what());
      }
    }
    r.integer("truncation", c.truncation);
    r.unsigned64("n_paths", c.n_paths);
    r.unsigned64("seed", c.seed);
  }
  {
    Reader r{problems, section("kernel") ? *section("kernel") : kEmpty, "kernel"};
    std::vector<std::string> names;
    if (r.strings("methods", names)) {
      c.kernel_methods.clear();
      for (const auto& name : names) {
        try {
          c.kernel_methods.push_back(kernel_method_from_string(name));
        } catch (const std::exception& e) {
          problems.add(std::string("kernel.methods: ") + e.what());
        }
      }
    }
    r.integer("parseval_n", c.parseval_n);
  }
  {
    Reader r{problems, section("tm") ? *section("tm") : kEmpty, "tm"};
    r.string("target", c.tm_target);
    r.number("t", c.tm_t);
    r.integer("k", c.tm_k);
  }
  {
    Reader r{problems, section("output") ? *section("output") : kEmpty, "output"};
    r.string("dir", c.output_dir);
    r.string("cache", c.cache_path);
  }
}

void check_ranges(const RunConfig& c, Problems& problems) {
  const auto& d = c.density;
  if (d.kind == "fbm") {
    if (!(d.hurst > 0.0 && d.hurst < 1.0)) problems.add("density.hurst must lie in (0, 1)");
  } else if (d.kind == "custom") {
    if (d.expression.empty() == d.table.empty()) {
      problems.add("custom density needs exactly one of density.expression or density.table");
    }
    if (!(d.b < 2.0)) problems.add("density.b must be < 2 (got " + format_number(d.b) + ")");
    if (!(d.K > 0.0) || !std::isfinite(d.K)) problems.add("density.K must be positive and finite");
    if (!(d.K_prime > 0.0) || !std::isfinite(d.K_prime)) {
      problems.add("density.K_prime must be positive and finite");
    }
    if (d.tail != "gaussian" && d.tail != "power" && d.tail != "compact") {
      problems.add("density.tail must be \"gaussian\", \"power\" or \"compact\"");
    }
    if (d.tail == "gaussian" && !(d.tail_parameter > 0.0)) {
      problems.add("gaussian density.tail_parameter (rate) must be positive");
    }
    if (d.tail == "power" && !(d.tail_parameter < 1.0)) {
      problems.add("power density.tail_parameter (exponent) must be < 1");
    }
  } else if (d.kind != "quartic_gaussian") {
    problems.add("density.kind must be \"fbm\", \"quartic_gaussian\" or \"custom\"");
  }
  if (!(c.quad_tol > 0.0 && c.quad_tol <= 1e-2)) problems.add("quad.tol must lie in (0, 1e-2]");
  if (c.max_refinements < 1) problems.add("quad.max_refinements must be >= 1");
  if (!c.points) {
    if (!(c.dt > 0.0)) problems.add("grid.dt must be positive");
    if (!(c.t_min <= 0.0 && 0.0 <= c.t_max)) {
      problems.add("grid must contain 0: need t_min <= 0 <= t_max");
    }
    if (c.dt > 0.0 && (c.t_max - c.t_min) / c.dt > 1e6) problems.add("grid has more than 1e6 points");
  } else {
    for (double p : *c.points) {
      if (!std::isfinite(p)) problems.add("grid.points must be finite");
    }
  }
  if (c.truncation < 0) problems.add("simulation.truncation must be >= 0");
  if (c.parseval_n < 1) problems.add("kernel.parseval_n must be >= 1");
  if (c.kernel_methods.empty()) problems.add("kernel.methods must name at least one method");
  for (const KernelMethod method : c.kernel_methods) {
    if (method == KernelMethod::closed_form_fbm && d.kind != "fbm") {
      problems.add("kernel.methods: closed_form_fbm needs density.kind = \"fbm\"");
    }
  }
  if (c.tm_target != "indicator" && c.tm_target != "hermite") {
    problems.add("tm.target must be \"indicator\" or \"hermite\"");
  }
  if (!std::isfinite(c.tm_t)) problems.add("tm.t must be finite");
  if (c.tm_k < 1) problems.add("tm.k must be >= 1");
  if (c.output_dir.empty()) problems.add("output.dir must not be empty");
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source) {
  Problems problems(source);
  const toml::parse_result parsed = toml::parse(text, source);
  if (!parsed) {
    const auto& err = parsed.error();
    problems.add(err.source(), std::string(err.description()));
    problems.raise_if_any();
  }
  RunConfig config;
  read_sections(parsed.table(), config, problems);
  check_ranges(config, problems);
  problems.raise_if_any();
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

std::string serialize_config(const RunConfig& c) {
  auto u64 = [](std::uint64_t v) {
    const std::string digits = std::to_string(v);
    return v > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()) ? quote(digits)
                                                                                      : digits;
  };
  std::ostringstream out;
  const auto& d = c.density;
  out << "[density]\n"
      << "kind = " << quote(d.kind) << '\n'
      << "hurst = " << format_number(d.hurst) << '\n'
      << "expression = " << quote(d.expression) << '\n'
      << "table = " << quote(d.table) << '\n'
      << "b = " << format_number(d.b) << '\n'
      << "K = " << format_number(d.K) << '\n'
      << "K_prime = " << format_number(d.K_prime) << '\n'
      << "tail = " << quote(d.tail) << '\n'
      << "tail_parameter = " << format_number(d.tail_parameter) << "\n\n";
  out << "[quad]\n"
      << "tol = " << format_number(c.quad_tol) << '\n'
      << "max_refinements = " << c.max_refinements << "\n\n";
  out << "[grid]\n"
      << "t_min = " << format_number(c.t_min) << '\n'
      << "t_max = " << format_number(c.t_max) << '\n'
      << "dt = " << format_number(c.dt) << '\n';
  if (c.points) {
    out << "points = [";
    for (std::size_t i = 0; i < c.points->size(); ++i) {
      out << (i ? ", " : "") << format_number((*c.points)[i]);
    }
    out << "]\n";
  }
  out << "\n[simulation]\n"
      << "convention = " << quote(to_string(c.convention)) << '\n'
      << "truncation = " << c.truncation << '\n'
      << "n_paths = " << u64(c.n_paths) << '\n'
      << "seed = " << u64(c.seed) << "\n\n";
  out << "[kernel]\nmethods = [";
  for (std::size_t i = 0; i < c.kernel_methods.size(); ++i) {
    out << (i ? ", " : "") << quote(to_string(c.kernel_methods[i]));
  }
  out << "]\nparseval_n = " << c.parseval_n << "\n\n";
  out << "[tm]\n"
      << "target = " << quote(c.tm_target) << '\n'
      << "t = " << format_number(c.tm_t) << '\n'
      << "k = " << c.tm_k << "\n\n";
  out << "[output]\n"
      << "dir = " << quote(c.output_dir) << '\n'
      << "cache = " << quote(c.cache_path) << '\n';
  return out.str();
}

std::vector<std::string> profile_names() { return {"fbm-half", "fbm-3q", "quartic"}; }

RunConfig builtin_profile(const std::string& name) {
  RunConfig c;
  c.t_min = 0.0;
  c.t_max = 1.0;
  c.dt = 0.01;
  c.truncation = 400;
  c.n_paths = 10000;
  c.seed = 20240601;
  c.kernel_methods = {KernelMethod::spectral_quadrature, KernelMethod::from_r};
  if (name == "fbm-half") {
    c.density.kind = "fbm";
    c.density.hurst = 0.5;
    c.kernel_methods.push_back(KernelMethod::closed_form_fbm);
  } else if (name == "fbm-3q") {
    c.density.kind = "fbm";
    c.density.hurst = 0.75;
    c.kernel_methods.push_back(KernelMethod::closed_form_fbm);
  } else if (name == "quartic") {
    c.density.kind = "quartic_gaussian";
    c.truncation = 50;
  } else {
    std::string known;
    for (const auto& p : profile_names()) known += (known.empty() ? "" : ", ") + p;
    throw ConfigError("unknown profile '" + name + "' (known: " + known + ")");
  }
  return c;
}

SpectralDensity make_density(const RunConfig& config) {
  const auto& d = config.density;
  try {
    if (d.kind == "fbm") return make_fbm_density(d.hurst);
    if (d.kind == "quartic_gaussian") return make_quartic_gaussian_density();
    DensityBounds bounds;
    bounds.singularity_exponent = d.b;
    bounds.near_zero_constant = d.K;
    bounds.tail_constant = d.K_prime;
    bounds.tail.kind = d.tail == "power"     ? quad::TailKind::power
                       : d.tail == "compact" ? quad::TailKind::compact
                                             : quad::TailKind::gaussian;
    bounds.tail.parameter = d.tail_parameter;
    SpectralDensity m = d.expression.empty() ? load_table_density(d.table, bounds)
                                             : make_expression_density(d.expression, bounds);
    require_admissible(m, config.quad_tol);
    return m;
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid configuration:\n  - ") + e.what());
  }
}

std::vector<double> time_points(const RunConfig& config) {
  if (config.points) return *config.points;
  return uniform_grid(config).points();
}

Grid uniform_grid(const RunConfig& config) {
  if (config.points) throw ConfigError("an explicit grid.points list is not a uniform grid");
  return Grid::anchored(config.t_min, config.t_max, config.dt);
}

}  // namespace gfbm
