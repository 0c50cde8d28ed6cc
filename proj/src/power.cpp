#include "memsim/power.hpp"

#include <bit>
#include <numeric>
#include <string>

namespace memsim {

CommandCounters::CommandCounters(std::uint32_t ranks, std::uint32_t banks)
    : n_of_acts_banks(ranks, std::vector<std::uint64_t>(banks, 0)),
      n_of_stores_banks(ranks, std::vector<std::uint64_t>(banks, 0)),
      n_rd(ranks, 0),
      n_wr(ranks, 0),
      n_ref(ranks, 0),
      n_sref(ranks, 0) {}

std::uint64_t CommandCounters::acts(std::uint32_t rank) const {
  const auto& v = n_of_acts_banks.at(rank);
  return std::accumulate(v.begin(), v.end(), std::uint64_t{0});
}

std::uint64_t CommandCounters::stores(std::uint32_t rank) const {
  const auto& v = n_of_stores_banks.at(rank);
  return std::accumulate(v.begin(), v.end(), std::uint64_t{0});
}

CommandCounters& CommandCounters::operator+=(const CommandCounters& other) {
  if (other.n_rd.size() != n_rd.size())
    throw InternalError("adding counters of different geometry");
  for (std::size_t r = 0; r < n_rd.size(); ++r) {
    for (std::size_t b = 0; b < n_of_acts_banks[r].size(); ++b) {
      n_of_acts_banks[r][b] += other.n_of_acts_banks[r][b];
      n_of_stores_banks[r][b] += other.n_of_stores_banks[r][b];
    }
    n_rd[r] += other.n_rd[r];
    n_wr[r] += other.n_wr[r];
    n_ref[r] += other.n_ref[r];
    n_sref[r] += other.n_sref[r];
  }
  return *this;
}

void handle_act(std::uint32_t rank, std::uint32_t bank, CommandCounters& counters) {
  ++counters.n_of_acts_banks.at(rank).at(bank);
}

void handle_act_st(std::uint32_t rank, std::uint32_t bank, bool bank_precharged,
                   CommandCounters& counters) {
  if (!bank_precharged)
    throw InternalError("ACT_ST on rank " + std::to_string(rank) + " bank " +
                        std::to_string(bank) + " which was not precharged");
  ++counters.n_of_acts_banks.at(rank).at(bank);
  ++counters.n_of_stores_banks.at(rank).at(bank);
}

namespace {

void add_flushes(const Command& cmd, CommandCounters& counters) {
  auto& stores = counters.n_of_stores_banks.at(cmd.rank);
  for (std::uint64_t mask = cmd.flushed_banks; mask; mask &= mask - 1) {
    const auto b = static_cast<std::size_t>(std::countr_zero(mask));
    ++stores.at(b);
  }
}

}  // namespace

void evaluate_commands(std::span<const Command> log, CommandCounters& counters) {
  for (const Command& cmd : log) {
    switch (cmd.kind) {
      case CommandKind::Act: handle_act(cmd.rank, cmd.bank, counters); break;
      case CommandKind::ActSt:
        handle_act_st(cmd.rank, cmd.bank, cmd.bank_precharged, counters);
        break;
      case CommandKind::Rd: ++counters.n_rd.at(cmd.rank); break;
      case CommandKind::Wr: ++counters.n_wr.at(cmd.rank); break;
      case CommandKind::Ref:
        ++counters.n_ref.at(cmd.rank);
        add_flushes(cmd, counters);
        break;
      case CommandKind::Sref:
        ++counters.n_sref.at(cmd.rank);
        add_flushes(cmd, counters);
        break;
      case CommandKind::Pre:
      case CommandKind::PdnEnter:
      case CommandKind::PdnExit: break;
      default:
        throw InternalError("unknown command kind " +
                            std::to_string(static_cast<int>(cmd.kind)));
    }
  }
}

CommandCounters evaluate_commands(std::span<const Command> log, std::uint32_t ranks,
                                  std::uint32_t banks) {
  CommandCounters counters(ranks, banks);
  evaluate_commands(log, counters);
  return counters;
}

double calc(double cycles, double current_a, const DeviceParams& dev) {
  if (cycles < 0.0 || current_a < 0.0)
    throw InternalError("calc: negative cycles or current");
  return cycles * dev.tck_seconds() * current_a * dev.vdd;
}

double store_energy(const CommandCounters& counters, std::uint32_t rank, const DeviceParams& dev) {
  if (dev.kind != DeviceKind::Stt) return 0.0;
  const double cycles = static_cast<double>(counters.stores(rank)) *
                        static_cast<double>(dev.timing("tST"));
  return calc(cycles, dev.current_a("IDD0") - dev.current_a("IDD3N"), dev);
}

EnergyBreakdown& EnergyBreakdown::operator+=(const EnergyBreakdown& o) {
  act_energy += o.act_energy;
  store_energy += o.store_energy;
  refresh_energy += o.refresh_energy;
  rdwr_energy += o.rdwr_energy;
  background_energy += o.background_energy;
  powerdown_energy += o.powerdown_energy;
  total += o.total;
  return *this;
}

namespace {

void finalize(EnergyBreakdown& e, Tick sim_cycles, const DeviceParams& dev) {
  e.total = e.act_energy + e.store_energy + e.refresh_energy + e.rdwr_energy +
            e.background_energy + e.powerdown_energy;
  const double seconds = static_cast<double>(sim_cycles) * dev.tck_seconds();
  e.avg_power = seconds > 0.0 ? e.total / seconds : 0.0;
}

}  // namespace

EnergyBreakdown rank_energy(const CommandCounters& counters, std::uint32_t rank,
                            const StateTimes& times, Tick sim_cycles, const DeviceParams& dev) {
  const double idd3n = dev.current_a("IDD3N");
  const auto cycles = [](std::uint64_t n, Tick t) {
    return static_cast<double>(n) * static_cast<double>(t);
  };
  const Tick t_burst = dev.timing("tBURST");

  EnergyBreakdown e;
  e.act_energy = calc(cycles(counters.acts(rank), dev.timing("tRAS")),
                      dev.current_a("IDD0") - idd3n, dev);
  e.store_energy = store_energy(counters, rank, dev);
  if (dev.kind == DeviceKind::Dram)
    e.refresh_energy = calc(cycles(counters.n_ref.at(rank), dev.timing("tRFC")),
                            dev.current_a("IDD5") - idd3n, dev);
  e.rdwr_energy = calc(cycles(counters.n_rd.at(rank), t_burst), dev.current_a("IDD4R") - idd3n, dev) +
                  calc(cycles(counters.n_wr.at(rank), t_burst), dev.current_a("IDD4W") - idd3n, dev);

  const auto dwell = [&](PowerState s) { return static_cast<double>(at(times, s)); };
  e.background_energy =
      calc(dwell(PowerState::Act) + dwell(PowerState::ActSt) + dwell(PowerState::Ref), idd3n, dev) +
      calc(dwell(PowerState::Idle) + dwell(PowerState::Pup), dev.current_a("IDD2N"), dev);
  e.powerdown_energy = calc(dwell(PowerState::Pdn), dev.powerdown_current_a(), dev) +
                       calc(dwell(PowerState::Sref), dev.self_refresh_current_a(), dev);
  finalize(e, sim_cycles, dev);
  return e;
}

EnergyReport full_breakdown(std::span<const Command> log, std::span<const StateTimes> state_times,
                            Tick sim_cycles, const DeviceParams& dev) {
  if (state_times.size() != dev.ranks)
    throw InternalError("full_breakdown: need state times for every rank");
  const CommandCounters counters = evaluate_commands(log, dev.ranks, dev.banks_per_rank);
  EnergyReport report;
  for (std::uint32_t r = 0; r < dev.ranks; ++r) {
    report.ranks.push_back(rank_energy(counters, r, state_times[r], sim_cycles, dev));
    report.total += report.ranks.back();
  }
  finalize(report.total, sim_cycles, dev);
  return report;
}

}  // namespace memsim
