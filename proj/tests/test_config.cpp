#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>

#include "gfbm/config.hpp"
#include "gfbm/error.hpp"

using namespace gfbm;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text, "test.toml");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("defaults and round trip") {
    CHECK(parse_config("") == RunConfig{});
    for (const auto& name : profile_names()) {
      const RunConfig c = builtin_profile(name);
      CHECK(parse_config(serialize_config(c)) == c);
    }
    RunConfig custom;
    custom.density.kind = "custom";
    custom.density.expression = "u^2*exp(-u^2)";
    custom.density.b = -2.0;
    custom.density.K = 0.3678794411714423;
    custom.density.tail_parameter = 1.0 / 3.0;
    custom.points = std::vector<double>{-0.1, 0.0, 1.0 / 7.0};
    custom.seed = std::numeric_limits<std::uint64_t>::max();
    custom.n_paths = 0;
    custom.convention = Convention::paper_literal;
    custom.kernel_methods = {KernelMethod::parseval, KernelMethod::from_r};
    custom.cache_path = "cache dir/\"quoted\".bin";
    custom.quad_tol = 1e-13;
    const std::string text = serialize_config(custom);
    CHECK(parse_config(text) == custom);
    CHECK(serialize_config(parse_config(text)) == text);
  }

  TEST_CASE("a full file") {
    const RunConfig c = parse_config(R"toml(
# comment
[density]
kind = "fbm"
hurst = 0.75

[quad]
tol = 1e-9
max_refinements = 100

[grid]
t_min = -1
t_max = 2
dt = 0.5

[simulation]
convention = "covariance_consistent"
truncation = 64
n_paths = 12
seed = "18446744073709551615"

[kernel]
methods = ["from_r", "closed_form_fbm"]
parseval_n = 10

[tm]
target = "hermite"
k = 3

[output]
dir = "results"
)toml");
    CHECK(c.density.hurst == 0.75);
    CHECK(c.quad_tol == 1e-9);
    CHECK(c.t_min == -1.0);
    CHECK(c.seed == std::numeric_limits<std::uint64_t>::max());
    CHECK(c.kernel_methods.size() == 2u);
    CHECK(c.tm_k == 3);
    CHECK(time_points(c) == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0});
    CHECK(make_density(c).descriptor() == "fbm(H=0.75)");
  }

  TEST_CASE("all problems are reported together") {
    const std::string message = error_of(R"toml(
[density]
kind = "custom"
expression = "exp(-u^2)"
b = 2.5
[grid]
dt = -1
colour = "blue"
[simulation]
seed = -4
truncation = "many"
[extra]
x = 1
)toml");
    CHECK(message.find("unknown key 'colour'") != std::string::npos);
    CHECK(message.find("unknown section [extra]") != std::string::npos);
    CHECK(message.find("density.b must be < 2") != std::string::npos);
    CHECK(message.find("grid.dt must be positive") != std::string::npos);
    CHECK(message.find("simulation.seed") != std::string::npos);
    CHECK(message.find("simulation.truncation") != std::string::npos);
    CHECK(message.find("invalid configuration (6 problems)") != std::string::npos);
  }

  TEST_CASE("individual rules") {
    CHECK_FALSE(error_of("[grid]\nt_min = 0.5\n").empty());
    CHECK_FALSE(error_of("[density]\nkind = \"quartic_gaussian\"\n[kernel]\nmethods = [\"closed_form_fbm\"]\n").empty());
    CHECK_FALSE(error_of("[density]\nhurst = 1.5\n").empty());
    CHECK_FALSE(error_of("[simulation]\nconvention = \"other\"\n").empty());
    CHECK_FALSE(error_of("[tm]\ntarget = \"bump\"\n").empty());
    CHECK_FALSE(error_of("[grid\n").empty());
    CHECK_FALSE(error_of("[quad]\ntol = \"small\"\n").empty());
    CHECK(error_of("[grid]\npoints = []\n").empty());
    CHECK_FALSE(error_of("[simulation]\nseed = 18446744073709551615\n").empty());
    CHECK_FALSE(error_of("[simulation]\nseed = \"12x\"\n").empty());
    CHECK_THROWS_AS(builtin_profile("nope"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.toml"), ConfigError);
  }

  TEST_CASE("density construction") {
    RunConfig c;
    c.density.kind = "custom";
    c.density.expression = "u^4*exp(-2*u^2)";
    c.density.K = 0.2;
    c.density.K_prime = 0.2;
    c.density.tail_parameter = 2.0;
    const SpectralDensity m = make_density(c);
    CHECK(m(1.0) == doctest::Approx(std::exp(-2.0)));
    c.density.K = 1e-4;  // the declared bound is false
    CHECK_THROWS_AS(make_density(c), ConfigError);
    c.points = std::vector<double>{0.0, 1.0};
    CHECK_THROWS_AS(uniform_grid(c), ConfigError);
  }
}
