#include "memsim/report.hpp"

#include <charconv>
#include <cmath>
#include <future>
#include <sstream>

namespace memsim {

using nlohmann::json;
using nlohmann::ordered_json;

StatsReport build_report(const SimResult& sim, const DeviceParams& dev,
                         std::optional<Tick> snapshot_cycles) {
  StatsReport rep;
  rep.device_name = dev.name;
  rep.total_sim_cycles = sim.sim_cycles;
  rep.total_sim_seconds = static_cast<double>(sim.sim_cycles) * dev.tck_seconds();

  double read_latency = 0.0;
  double write_latency = 0.0;
  for (const auto& req : sim.requests) {
    if (!req.completion_tick) throw InternalError("report built before the trace drained");
    const double ns = static_cast<double>(*req.completion_tick - req.arrival_tick) * dev.tck_ns;
    if (req.kind == RequestKind::Read) {
      ++rep.n_read_requests;
      read_latency += ns;
    } else {
      ++rep.n_write_requests;
      write_latency += ns;
    }
  }
  if (rep.n_read_requests) rep.avg_read_latency_ns = read_latency / rep.n_read_requests;
  if (rep.n_write_requests) rep.avg_write_latency_ns = write_latency / rep.n_write_requests;

  rep.n_row_hits = sim.row_hits;
  rep.n_row_misses = sim.row_misses;
  if (const auto n = sim.row_hits + sim.row_misses; n > 0)
    rep.row_hit_rate = static_cast<double>(sim.row_hits) / static_cast<double>(n);

  for (const auto& cmd : sim.log) {
    if (cmd.kind == CommandKind::Act) ++rep.n_act;
    if (cmd.kind == CommandKind::ActSt) ++rep.n_act_st;
    if (cmd.kind == CommandKind::Ref) ++rep.n_ref;
  }
  const CommandCounters counters = evaluate_commands(sim.log, dev.ranks, dev.banks_per_rank);
  std::uint64_t n_rd = 0, n_wr = 0;
  for (std::uint32_t r = 0; r < dev.ranks; ++r) {
    rep.n_stores += counters.stores(r);
    n_rd += counters.n_rd[r];
    n_wr += counters.n_wr[r];
  }

  std::vector<StateTimes> times;
  for (const auto& rank : sim.ranks) {
    RankStateTime st;
    st.cycles = rank.state_time_report(sim.sim_cycles);
    for (std::size_t s = 0; s < kNumPowerStates; ++s)
      st.fraction[s] = sim.sim_cycles ? static_cast<double>(st.cycles[s]) /
                                            static_cast<double>(sim.sim_cycles)
                                      : (kAllPowerStates[s] == PowerState::Idle ? 1.0 : 0.0);
    times.push_back(st.cycles);
    rep.state_time.push_back(st);
  }

  if (rep.total_sim_seconds > 0.0) {
    const double bb = dev.burst_bytes();
    rep.avg_read_bandwidth = static_cast<double>(n_rd) * bb / rep.total_sim_seconds / 1e6;
    rep.avg_write_bandwidth = static_cast<double>(n_wr) * bb / rep.total_sim_seconds / 1e6;
  }

  rep.energy = full_breakdown(sim.log, times, sim.sim_cycles, dev);
  rep.avg_power_mW = rep.energy.total.avg_power * 1e3;

  if (snapshot_cycles && *snapshot_cycles > 0) {
    std::size_t prefix = 0;
    for (Tick t = *snapshot_cycles; t <= sim.sim_cycles; t += *snapshot_cycles) {
      while (prefix < sim.log.size() && sim.log[prefix].issue_tick < t) ++prefix;
      std::vector<StateTimes> at_t;
      for (const auto& rank : sim.ranks) at_t.push_back(state_times_at(rank.history(), t));
      rep.snapshots.push_back(
          {t, full_breakdown(std::span(sim.log).first(prefix), at_t, t, dev)});
    }
  }

  check_report(rep);
  return rep;
}

void check_report(const StatsReport& r) {
  const auto n = r.n_row_hits + r.n_row_misses;
  if (n == 0 ? r.row_hit_rate.has_value()
             : !r.row_hit_rate ||
                   *r.row_hit_rate != static_cast<double>(r.n_row_hits) / static_cast<double>(n))
    throw InternalError("report: row_hit_rate does not match hit/miss counts");
  for (std::size_t rank = 0; rank < r.state_time.size(); ++rank) {
    double sum = 0.0;
    Tick cycles = 0;
    for (std::size_t s = 0; s < kNumPowerStates; ++s) {
      sum += r.state_time[rank].fraction[s];
      cycles += r.state_time[rank].cycles[s];
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw InternalError("report: state-time fractions of rank " + std::to_string(rank) +
                          " sum to " + std::to_string(sum));
    if (cycles != r.total_sim_cycles)
      throw InternalError("report: state times of rank " + std::to_string(rank) +
                          " do not add up to the simulated cycles");
  }
}

// ---------------------------------------------------------------------------
// JSON / CSV
// ---------------------------------------------------------------------------

namespace {

constexpr const char* kEnergyFields[] = {"act_energy",        "store_energy",     "refresh_energy",
                                         "rdwr_energy",       "background_energy", "powerdown_energy",
                                         "total",             "avg_power"};

std::array<double, 8> energy_values(const EnergyBreakdown& e) {
  return {e.act_energy,        e.store_energy,     e.refresh_energy, e.rdwr_energy,
          e.background_energy, e.powerdown_energy, e.total,          e.avg_power};
}

ordered_json to_json(const EnergyBreakdown& e) {
  ordered_json j;
  const auto v = energy_values(e);
  for (std::size_t i = 0; i < v.size(); ++i) j[kEnergyFields[i]] = v[i];
  return j;
}

EnergyBreakdown breakdown_from_json(const json& j) {
  EnergyBreakdown e;
  e.act_energy = j.at("act_energy").get<double>();
  e.store_energy = j.at("store_energy").get<double>();
  e.refresh_energy = j.at("refresh_energy").get<double>();
  e.rdwr_energy = j.at("rdwr_energy").get<double>();
  e.background_energy = j.at("background_energy").get<double>();
  e.powerdown_energy = j.at("powerdown_energy").get<double>();
  e.total = j.at("total").get<double>();
  e.avg_power = j.at("avg_power").get<double>();
  return e;
}

ordered_json to_json(const EnergyReport& e) {
  ordered_json ranks = ordered_json::array();
  for (const auto& r : e.ranks) ranks.push_back(to_json(r));
  return {{"ranks", ranks}, {"total", to_json(e.total)}};
}

EnergyReport energy_from_json(const json& j) {
  EnergyReport e;
  for (const auto& r : j.at("ranks")) e.ranks.push_back(breakdown_from_json(r));
  e.total = breakdown_from_json(j.at("total"));
  return e;
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

}  // namespace

ordered_json to_json(const StatsReport& r) {
  ordered_json j;
  j["device_name"] = r.device_name;
  j["total_sim_cycles"] = r.total_sim_cycles;
  j["total_sim_seconds"] = r.total_sim_seconds;
  j["n_read_requests"] = r.n_read_requests;
  j["n_write_requests"] = r.n_write_requests;
  j["n_row_hits"] = r.n_row_hits;
  j["n_row_misses"] = r.n_row_misses;
  j["row_hit_rate"] = r.row_hit_rate ? ordered_json(*r.row_hit_rate) : ordered_json(nullptr);
  j["n_act"] = r.n_act;
  j["n_act_st"] = r.n_act_st;
  j["n_stores"] = r.n_stores;
  j["n_ref"] = r.n_ref;

  ordered_json ranks = ordered_json::array();
  for (std::size_t i = 0; i < r.state_time.size(); ++i) {
    ordered_json cycles, fraction;
    for (std::size_t s = 0; s < kNumPowerStates; ++s) {
      const std::string name(to_string(kAllPowerStates[s]));
      cycles[name] = r.state_time[i].cycles[s];
      fraction[name] = r.state_time[i].fraction[s];
    }
    ranks.push_back({{"rank", i}, {"cycles", cycles}, {"fraction", fraction}});
  }
  j["state_time"] = ranks;

  j["avg_read_bandwidth"] = r.avg_read_bandwidth;
  j["avg_write_bandwidth"] = r.avg_write_bandwidth;
  j["avg_read_latency_ns"] = r.avg_read_latency_ns;
  j["avg_write_latency_ns"] = r.avg_write_latency_ns;
  j["energy"] = to_json(r.energy);
  j["avg_power_mW"] = r.avg_power_mW;
  if (!r.snapshots.empty()) {
    ordered_json snaps = ordered_json::array();
    for (const auto& s : r.snapshots) snaps.push_back({{"tick", s.tick}, {"energy", to_json(s.energy)}});
    j["snapshots"] = snaps;
  }
  return j;
}

StatsReport report_from_json(const json& j) {
  StatsReport r;
  r.device_name = j.at("device_name").get<std::string>();
  r.total_sim_cycles = j.at("total_sim_cycles").get<Tick>();
  r.total_sim_seconds = j.at("total_sim_seconds").get<double>();
  r.n_read_requests = j.at("n_read_requests").get<std::uint64_t>();
  r.n_write_requests = j.at("n_write_requests").get<std::uint64_t>();
  r.n_row_hits = j.at("n_row_hits").get<std::uint64_t>();
  r.n_row_misses = j.at("n_row_misses").get<std::uint64_t>();
  if (!j.at("row_hit_rate").is_null()) r.row_hit_rate = j.at("row_hit_rate").get<double>();
  r.n_act = j.at("n_act").get<std::uint64_t>();
  r.n_act_st = j.at("n_act_st").get<std::uint64_t>();
  r.n_stores = j.at("n_stores").get<std::uint64_t>();
  r.n_ref = j.at("n_ref").get<std::uint64_t>();
  for (const auto& rank : j.at("state_time")) {
    RankStateTime st;
    for (std::size_t s = 0; s < kNumPowerStates; ++s) {
      const std::string name(to_string(kAllPowerStates[s]));
      st.cycles[s] = rank.at("cycles").at(name).get<Tick>();
      st.fraction[s] = rank.at("fraction").at(name).get<double>();
    }
    r.state_time.push_back(st);
  }
  r.avg_read_bandwidth = j.at("avg_read_bandwidth").get<double>();
  r.avg_write_bandwidth = j.at("avg_write_bandwidth").get<double>();
  r.avg_read_latency_ns = j.at("avg_read_latency_ns").get<double>();
  r.avg_write_latency_ns = j.at("avg_write_latency_ns").get<double>();
  r.energy = energy_from_json(j.at("energy"));
  r.avg_power_mW = j.at("avg_power_mW").get<double>();
  if (j.contains("snapshots"))
    for (const auto& s : j.at("snapshots"))
      r.snapshots.push_back({s.at("tick").get<Tick>(), energy_from_json(s.at("energy"))});
  return r;
}

std::string emit_json(const StatsReport& report) {
  check_report(report);
  return to_json(report).dump(2) + "\n";
}

std::string emit_csv(const StatsReport& r) {
  check_report(r);
  std::vector<std::pair<std::string, std::string>> cols;
  auto add = [&](std::string name, std::string value) { cols.emplace_back(std::move(name), std::move(value)); };
  auto num = [](auto v) {
    if constexpr (std::is_floating_point_v<decltype(v)>) return format_double(v);
    else return std::to_string(v);
  };

  add("device_name", r.device_name);
  add("total_sim_cycles", num(r.total_sim_cycles));
  add("total_sim_seconds", num(r.total_sim_seconds));
  add("n_read_requests", num(r.n_read_requests));
  add("n_write_requests", num(r.n_write_requests));
  add("n_row_hits", num(r.n_row_hits));
  add("n_row_misses", num(r.n_row_misses));
  add("row_hit_rate", r.row_hit_rate ? num(*r.row_hit_rate) : "");
  add("n_act", num(r.n_act));
  add("n_act_st", num(r.n_act_st));
  add("n_stores", num(r.n_stores));
  add("n_ref", num(r.n_ref));
  add("avg_read_bandwidth", num(r.avg_read_bandwidth));
  add("avg_write_bandwidth", num(r.avg_write_bandwidth));
  add("avg_read_latency_ns", num(r.avg_read_latency_ns));
  add("avg_write_latency_ns", num(r.avg_write_latency_ns));
  add("avg_power_mW", num(r.avg_power_mW));
  for (std::size_t rank = 0; rank < r.state_time.size(); ++rank) {
    const std::string prefix = "rank" + std::to_string(rank) + ".";
    for (std::size_t s = 0; s < kNumPowerStates; ++s)
      add(prefix + std::string(to_string(kAllPowerStates[s])), num(r.state_time[rank].cycles[s]));
    for (std::size_t s = 0; s < kNumPowerStates; ++s)
      add(prefix + std::string(to_string(kAllPowerStates[s])) + ".fraction",
          num(r.state_time[rank].fraction[s]));
    if (rank < r.energy.ranks.size()) {
      const auto v = energy_values(r.energy.ranks[rank]);
      for (std::size_t i = 0; i < v.size(); ++i) add(prefix + kEnergyFields[i], num(v[i]));
    }
  }
  const auto v = energy_values(r.energy.total);
  for (std::size_t i = 0; i < v.size(); ++i) add(std::string("energy.") + kEnergyFields[i], num(v[i]));

  std::string header, values;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) {
      header += ',';
      values += ',';
    }
    header += cols[i].first;
    values += cols[i].second;
  }
  return header + "\n" + values + "\n";
}

// ---------------------------------------------------------------------------
// Runs
// ---------------------------------------------------------------------------

bool TraceSource::operator==(const TraceSource& o) const {
  if (path != o.path || synthetic.has_value() != o.synthetic.has_value()) return false;
  if (!synthetic) return true;
  const auto& a = *synthetic;
  const auto& b = *o.synthetic;
  return a.pattern == b.pattern && a.count == b.count && a.write_fraction == b.write_fraction &&
         a.inter_arrival_ns == b.inter_arrival_ns && a.seed == b.seed && a.size_bytes == b.size_bytes;
}

StatsReport run(const RunConfig& cfg) {
  if (cfg.trace.path.has_value() == cfg.trace.synthetic.has_value())
    throw InputError("run needs exactly one trace source");
  validate(cfg.device);

  std::vector<TraceRecord> records;
  if (cfg.trace.path) {
    records = load_trace_file(*cfg.trace.path);
  } else {
    records = generate(*cfg.trace.synthetic, AddressMap(cfg.device, cfg.address_map));
  }
  const auto requests = to_requests(records, cfg.device);
  const SimResult sim =
      memsim::run(cfg.device, requests, {cfg.address_map, cfg.scheduler, cfg.min_sim_cycles});
  return build_report(sim, cfg.device, cfg.snapshot_cycles);
}

double mean_latency_ns(const StatsReport& r) {
  const auto n = r.n_read_requests + r.n_write_requests;
  if (n == 0) return 0.0;
  return (r.avg_read_latency_ns * static_cast<double>(r.n_read_requests) +
          r.avg_write_latency_ns * static_cast<double>(r.n_write_requests)) /
         static_cast<double>(n);
}

ComparisonReport compare(const RunConfig& a, const RunConfig& b) {
  if (!(a.trace == b.trace)) throw InputError("compare: both runs must use the same trace");

  auto fa = std::async(std::launch::async, [&] { return run(a); });
  auto fb = std::async(std::launch::async, [&] { return run(b); });

  ComparisonReport c;
  c.a = fa.get();
  c.b = fb.get();
  auto overhead = [](const StatsReport& r, const DeviceParams& dev) {
    return static_cast<double>(r.n_stores) * static_cast<double>(dev.store_cycles()) * dev.tck_ns;
  };
  c.store_overhead_ns_a = overhead(c.a, a.device);
  c.store_overhead_ns_b = overhead(c.b, b.device);

  c.delta.avg_read_latency_ns = c.a.avg_read_latency_ns - c.b.avg_read_latency_ns;
  c.delta.avg_write_latency_ns = c.a.avg_write_latency_ns - c.b.avg_write_latency_ns;
  c.delta.avg_latency_ns = mean_latency_ns(c.a) - mean_latency_ns(c.b);
  c.delta.total_energy = c.a.energy.total.total - c.b.energy.total.total;
  c.delta.store_energy = c.a.energy.total.store_energy - c.b.energy.total.store_energy;
  c.delta.avg_power_mW = c.a.avg_power_mW - c.b.avg_power_mW;
  c.delta.store_overhead_ns = c.store_overhead_ns_a - c.store_overhead_ns_b;
  c.delta.n_stores = static_cast<std::int64_t>(c.a.n_stores) - static_cast<std::int64_t>(c.b.n_stores);
  c.delta.n_ref = static_cast<std::int64_t>(c.a.n_ref) - static_cast<std::int64_t>(c.b.n_ref);
  return c;
}

ordered_json to_json(const ComparisonReport& c) {
  ordered_json delta;
  delta["avg_read_latency_ns"] = c.delta.avg_read_latency_ns;
  delta["avg_write_latency_ns"] = c.delta.avg_write_latency_ns;
  delta["avg_latency_ns"] = c.delta.avg_latency_ns;
  delta["total_energy"] = c.delta.total_energy;
  delta["store_energy"] = c.delta.store_energy;
  delta["avg_power_mW"] = c.delta.avg_power_mW;
  delta["store_overhead_ns"] = c.delta.store_overhead_ns;
  delta["n_stores"] = c.delta.n_stores;
  delta["n_ref"] = c.delta.n_ref;

  ordered_json j;
  j["a"] = to_json(c.a);
  j["b"] = to_json(c.b);
  j["store_overhead_ns_a"] = c.store_overhead_ns_a;
  j["store_overhead_ns_b"] = c.store_overhead_ns_b;
  j["delta"] = delta;
  return j;
}

}  // namespace memsim
