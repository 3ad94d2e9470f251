// Subcommand options and entry points.
#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "report.hpp"

namespace epinet::cli {

/// Bad flag combinations detected after parsing; exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::uint64_t seed = 1;
  std::string format = "csv";
  std::string out;  ///< empty: stdout
  int jobs = 1;
  Provenance provenance;
  Format fmt() const;
};

struct GenerateOptions {
  std::string family;
  std::optional<int> n;
  double p = 0;
  std::string degree_dist, degrees_file;
  std::string rho, pi;
  std::string sizes;
  double global_p = 0;
  std::string attributes;
};

struct SimulateOptions {
  std::string graph, attributes;
  bool online = false;
  std::string degree_dist;
  std::optional<int> n;
  double lambda = 1, gamma = 1;
  std::optional<double> delta, lambda_h;
  int initial = 1;
  int replicas = 1;
  double t_end = 20;
  int steps = 200;
  double t_max = std::numeric_limits<double>::infinity();
  std::optional<double> epsilon;
  double major_fraction = 0.05;
  std::string out_dir;
  bool events = false;
};

struct OdeOptions {
  std::string system;
  std::string degree_dist;
  double lambda = 1, gamma = 1, lambda_prime = 1;
  double s0 = 0.99, i0 = 0.01;
  std::optional<double> itilde0, C, p_i0, p_s0;
  double t_end = 20;
  int steps = 200;
};

struct IndicatorOptions {
  std::string model;
  double lambda = 1, gamma = 1;
  std::optional<double> kappa, alpha;
  std::string degree_dist, Lambda, rho;
  std::string period = "exp";
};

struct AnalyzeOptions {
  std::string graph, attributes;
  int null_samples = 20;
  std::optional<int> k0;
  std::string coords;
  double delta = 1;
  int layout_iters = 200;
  bool whole = false;  ///< all components instead of the giant one
};

struct CompareOptions {
  std::string sim, ode;
  std::string columns = "S:s,I:i,R:r";
  double threshold = 0.05;
};

void cmd_generate(const Common& c, const GenerateOptions& o);
void cmd_simulate(const Common& c, const SimulateOptions& o);
void cmd_ode(const Common& c, const OdeOptions& o);
void cmd_indicators(const Common& c, const IndicatorOptions& o);
void cmd_analyze(const Common& c, const AnalyzeOptions& o);
void cmd_compare(const Common& c, const CompareOptions& o);

}  // namespace epinet::cli
