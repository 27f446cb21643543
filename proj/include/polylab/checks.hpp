#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "polylab/lattice.hpp"

namespace polylab::checks {

using json = nlohmann::ordered_json;

inline constexpr const char* kEngineVersion = "polylab 1.0.0";

struct Tolerances {
  double legendre = 1e-10;
  double periodicity = 1e-9;
  double automorphy = 1e-9;
  double pushforward = 1e-7;
  double distribution = 1e-7;
  double robert = 1e-7;
  double theorem = 1e-6;
};

struct RunConfig {
  double target_eps = 1e-17;
  Tolerances tol;
  std::uint64_t seed = 20240611;
  std::optional<cplx> tau;
  std::optional<int> N;
  std::optional<int> a;
  std::optional<int> g;
  std::optional<int> n;
  std::optional<int> gA;
  std::optional<int> gB;
  std::optional<int> samples;
  double singular_radius = 0.05;
  std::size_t budget = 20000;
  bool timing = false;
};

struct CheckReport {
  std::string check;
  json params = json::object();
  double max_abs_residual = 0.0;  // NaN when the check aborted
  bool pass = false;
  std::int64_t runtime_ms = 0;
  std::string engine_version = kEngineVersion;
  std::string reason;

  json to_json() const;
  static std::string csv_header();
  std::string csv_row() const;
};

// Check names in execution order for a subcommand ("all" expands to every check).
std::vector<std::string> expand(const std::string& subcommand);
const std::vector<std::string>& subcommands();

// Runs one named check; exceptions become failed reports with a reason.
CheckReport run_check(const std::string& name, const RunConfig& cfg);

// Seeded random oriented lattices, reduced.
std::vector<Lattice> random_lattices(std::uint64_t seed, int count);

std::string format_complex(cplx z);
// Grammar: a, bi, a+bi, a-bi, i, -i, with optional exponents (1e-8, 2.5e-3+1e-2i).
cplx parse_complex(const std::string& text);

}  // namespace polylab::checks
