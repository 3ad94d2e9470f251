// Continuous-time SIR/SEIR simulation on frozen graphs and on the configuration
// model revealed online.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <vector>

#include "epinet/graph.hpp"
#include "epinet/measures.hpp"

namespace epinet {

struct EpidemicParams {
  double lambda = 1.0;  ///< per-edge transmission rate
  double gamma = 1.0;   ///< removal rate
  std::optional<double> delta;     ///< latent activation rate (SEIR when set)
  std::optional<double> lambda_h;  ///< within-household rate
  void validate() const;
};

enum class EventKind { infection, activation, removal };

struct Event {
  double time = 0;
  EventKind kind = EventKind::infection;
  int actor = -1;     ///< infectee, activated or removed individual
  int infector = -1;  ///< infections only
};

enum class StopReason { extinct, time_horizon, epsilon, infection_cap };

struct EventLog {
  int population = 0;
  std::vector<int> index_cases;  ///< infectious at time 0
  std::vector<Event> events;
  double horizon = 0;            ///< time the run stopped
  StopReason stop = StopReason::extinct;
  std::vector<std::size_t> tied; ///< events whose time equalled their predecessor's

  /// Index cases plus infections.
  std::size_t total_infected() const;
};

struct SimOptions {
  double t_max = std::numeric_limits<double>::infinity();
  /// Stop once this many individuals (index cases included) have been infected; 0 = off.
  std::size_t infection_cap = 0;
};

/// Exact event-driven SIR (SEIR when params.delta is set) on a frozen graph. Parallel
/// edges carry independent clocks.
EventLog simulate_sir(const Graph& g, const EpidemicParams& params, const std::vector<int>& initial_infected,
                      std::uint64_t seed, const SimOptions& opt = {});

/// As simulate_sir, with rate lambda_h on edges whose endpoints share a household id.
EventLog simulate_household_sir(const Graph& g, const EpidemicParams& params,
                                const std::vector<int>& initial_infected, std::uint64_t seed,
                                const SimOptions& opt = {});

/// Degree measures and counts at sample times. E individuals (SEIR) are counted in I.
struct MeasureTrajectory {
  std::vector<double> times;
  std::vector<DegreeMeasure> mu_s, mu_is, mu_rs;
  std::vector<long> S, I, R;
  std::vector<long> NS, NIS, NRS;
  std::vector<bool> clamped;  ///< sample time beyond the log horizon
  std::size_t size() const { return times.size(); }
};

MeasureTrajectory track_measures(const EventLog& log, const Graph& g, const std::vector<double>& sample_times);

struct OnlineOptions {
  double t_max = std::numeric_limits<double>::infinity();
  std::optional<double> epsilon;  ///< stop when N^IS < epsilon N
  std::size_t infection_cap = 0;
  std::vector<double> sample_times;
  bool check_bookkeeping = false; ///< recompute N^IS from scratch after every event
};

struct OnlineResult {
  EventLog log;
  MeasureTrajectory trajectory;
};

/// Online configuration-model epidemic driven by the three integer-valued degree
/// measures. Individuals are numbered S first (by degree), then I, then R.
OnlineResult simulate_cm_online(const DegreeMeasure& mu_s0, const DegreeMeasure& mu_is0,
                                const DegreeMeasure& mu_rs0, const EpidemicParams& params, std::uint64_t seed,
                                const OnlineOptions& opt = {});

/// Who infected whom.
struct InfectionForest {
  std::vector<int> roots;
  std::vector<int> parent;              ///< -1 for index cases and the never infected
  std::vector<double> infection_time;   ///< NaN when never infected
  std::vector<double> removal_time;     ///< NaN when not removed within the log
  std::vector<std::vector<int>> children;
  bool infected(int u) const { return infection_time[u] == infection_time[u]; }
};

InfectionForest infection_tree(const EventLog& log);

// CSV writers.
void write_event_log(std::ostream& out, const EventLog& log);
void write_trajectory(std::ostream& out, const MeasureTrajectory& tr);
/// Measures text format, one block per sample time introduced by `# t=<time> <name>`.
void write_measure_snapshots(std::ostream& out, const MeasureTrajectory& tr);

}  // namespace epinet
