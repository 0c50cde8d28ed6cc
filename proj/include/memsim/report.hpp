#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "memsim/controller.hpp"
#include "memsim/device.hpp"
#include "memsim/power.hpp"
#include "memsim/trace.hpp"

namespace memsim {

struct RankStateTime {
  StateTimes cycles{};
  std::array<double, kNumPowerStates> fraction{};

  bool operator==(const RankStateTime&) const = default;
};

struct EnergySnapshot {
  Tick tick = 0;
  EnergyReport energy;

  bool operator==(const EnergySnapshot&) const = default;
};

/// Everything a simulation reports.
struct StatsReport {
  std::string device_name;
  Tick total_sim_cycles = 0;
  double total_sim_seconds = 0.0;

  std::uint64_t n_read_requests = 0;
  std::uint64_t n_write_requests = 0;
  std::uint64_t n_row_hits = 0;
  std::uint64_t n_row_misses = 0;
  std::optional<double> row_hit_rate;  // nullopt when no request completed

  std::uint64_t n_act = 0;
  std::uint64_t n_act_st = 0;
  std::uint64_t n_stores = 0;
  std::uint64_t n_ref = 0;

  std::vector<RankStateTime> state_time;  // per rank

  double avg_read_bandwidth = 0.0;   // MB/s
  double avg_write_bandwidth = 0.0;  // MB/s
  double avg_read_latency_ns = 0.0;
  double avg_write_latency_ns = 0.0;

  EnergyReport energy;
  double avg_power_mW = 0.0;

  std::vector<EnergySnapshot> snapshots;  // only with a snapshot interval

  bool operator==(const StatsReport&) const = default;
};

/// Assembles a report from a finished simulation. With `snapshot_cycles`,
/// cumulative energy is also reported at every multiple of it.
StatsReport build_report(const SimResult& sim, const DeviceParams& dev,
                         std::optional<Tick> snapshot_cycles = std::nullopt);

/// Throws InternalError if the hit-rate formula or the per-rank state-time
/// fraction sum (1 +- 1e-9) does not hold.
void check_report(const StatsReport& report);

nlohmann::ordered_json to_json(const StatsReport& report);
StatsReport report_from_json(const nlohmann::json& j);

std::string emit_json(const StatsReport& report);
/// One header line and one value line. Per-rank values become
/// `rank<i>.<name>` columns.
std::string emit_csv(const StatsReport& report);

// ---------------------------------------------------------------------------
// Runs
// ---------------------------------------------------------------------------

enum class OutputFormat { Json, Csv };

/// Where a run's requests come from: a trace file or a synthetic spec.
struct TraceSource {
  std::optional<std::string> path;
  std::optional<SyntheticSpec> synthetic;

  bool operator==(const TraceSource& o) const;
};

struct RunConfig {
  DeviceParams device;
  TraceSource trace;
  SchedulerPolicy scheduler = SchedulerPolicy::FrFcfs;
  AddressPolicy address_map = AddressPolicy::RoRaBaCo;
  std::optional<Tick> snapshot_cycles;
  Tick min_sim_cycles = 0;
};

/// Loads or generates the trace, simulates it to completion and reports.
StatsReport run(const RunConfig& cfg);

struct ComparisonDeltas {
  double avg_read_latency_ns = 0.0;
  double avg_write_latency_ns = 0.0;
  double avg_latency_ns = 0.0;  // over all requests
  double total_energy = 0.0;
  double store_energy = 0.0;
  double avg_power_mW = 0.0;
  double store_overhead_ns = 0.0;  // n_stores * tST
  std::int64_t n_stores = 0;
  std::int64_t n_ref = 0;

  bool operator==(const ComparisonDeltas&) const = default;
};

struct ComparisonReport {
  StatsReport a;
  StatsReport b;
  double store_overhead_ns_a = 0.0;
  double store_overhead_ns_b = 0.0;
  ComparisonDeltas delta;  // a - b
};

/// Mean latency over all requests of a report.
double mean_latency_ns(const StatsReport& r);

/// Runs both configurations concurrently on the same trace. Throws
/// InputError if their trace sources differ.
ComparisonReport compare(const RunConfig& a, const RunConfig& b);

nlohmann::ordered_json to_json(const ComparisonReport& report);

}  // namespace memsim
