#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "memsim/device.hpp"
#include "memsim/memstate.hpp"

namespace memsim {

/// Command counts gathered from a CommandLog, per rank and per bank.
struct CommandCounters {
  // [rank][bank]
  std::vector<std::vector<std::uint64_t>> n_of_acts_banks;
  std::vector<std::vector<std::uint64_t>> n_of_stores_banks;
  // [rank]
  std::vector<std::uint64_t> n_rd, n_wr, n_ref, n_sref;

  CommandCounters() = default;
  CommandCounters(std::uint32_t ranks, std::uint32_t banks);

  std::uint64_t acts(std::uint32_t rank) const;
  std::uint64_t stores(std::uint32_t rank) const;

  CommandCounters& operator+=(const CommandCounters& other);
  bool operator==(const CommandCounters&) const = default;
};

/// ACT: one activation on the bank.
void handle_act(std::uint32_t rank, std::uint32_t bank, CommandCounters& counters);

/// ACT_ST: one activation and one store on the bank. `bank_precharged` is the
/// precondition recorded on the command; false throws InternalError.
void handle_act_st(std::uint32_t rank, std::uint32_t bank, bool bank_precharged,
                   CommandCounters& counters);

/// Accumulates `log` into `counters`. Counters are additive, so a log may be
/// evaluated in any number of segments.
void evaluate_commands(std::span<const Command> log, CommandCounters& counters);
CommandCounters evaluate_commands(std::span<const Command> log, std::uint32_t ranks,
                                  std::uint32_t banks);

/// Energy in joules drawn by `current_a` over `cycles` clock cycles.
double calc(double cycles, double current_a, const DeviceParams& dev);

/// Store energy of one rank: calc(stores * tST, IDD0 - IDD3N). 0 for DRAM.
double store_energy(const CommandCounters& counters, std::uint32_t rank, const DeviceParams& dev);

struct EnergyBreakdown {
  double act_energy = 0.0;
  double store_energy = 0.0;
  double refresh_energy = 0.0;
  double rdwr_energy = 0.0;
  double background_energy = 0.0;
  double powerdown_energy = 0.0;
  double total = 0.0;
  double avg_power = 0.0;  // W

  EnergyBreakdown& operator+=(const EnergyBreakdown& other);
  bool operator==(const EnergyBreakdown&) const = default;
};

struct EnergyReport {
  std::vector<EnergyBreakdown> ranks;
  EnergyBreakdown total;

  bool operator==(const EnergyReport&) const = default;
};

/// Energy of one rank from its counters and power-state dwell times.
EnergyBreakdown rank_energy(const CommandCounters& counters, std::uint32_t rank,
                            const StateTimes& times, Tick sim_cycles, const DeviceParams& dev);

/// Per-rank and total energy of a completed simulation.
EnergyReport full_breakdown(std::span<const Command> log, std::span<const StateTimes> state_times,
                            Tick sim_cycles, const DeviceParams& dev);

}  // namespace memsim
