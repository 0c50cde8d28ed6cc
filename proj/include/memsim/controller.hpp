#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "memsim/address_map.hpp"
#include "memsim/device.hpp"
#include "memsim/memstate.hpp"

namespace memsim {

enum class SchedulerPolicy {
  FrFcfs,  ///< row hits first, then oldest
  Fcfs,
};

SchedulerPolicy parse_scheduler_policy(std::string_view text);
std::string_view to_string(SchedulerPolicy p);

enum class RequestKind : std::uint8_t { Read, Write };

struct MemoryRequest {
  Tick arrival_tick = 0;
  RequestKind kind = RequestKind::Read;
  std::uint64_t address = 0;
  std::uint32_t size_bytes = 0;
  std::optional<Tick> completion_tick;  // set once serviced
  /// Set once serviced: true when no burst of the request needed an
  /// activation.
  bool row_hit = false;
};

/// Single-channel memory controller with an open-page policy.
///
/// Requests are split into burst-sized accesses and serviced one at a time;
/// each command is issued no earlier than the previous one, so the command
/// log is ordered by issue tick. STT devices pick ACT or ACT_ST per bank
/// storing state; DRAM devices are refreshed every tREFI.
class Controller {
 public:
  explicit Controller(DeviceParams dev, AddressPolicy addr = AddressPolicy::RoRaBaCo,
                      SchedulerPolicy sched = SchedulerPolicy::FrFcfs);

  const DeviceParams& device() const { return dev_; }
  const AddressMap& address_map() const { return map_; }

  /// Number of burst accesses `req` is split into.
  std::size_t burst_count(const MemoryRequest& req) const;

  /// Queues `req`. Returns false (and queues nothing) for a zero-size
  /// request. Throws std::out_of_range if any byte lies beyond capacity.
  bool enqueue(MemoryRequest req);

  /// Services every queued request, interleaving due DRAM refreshes.
  void drain();

  /// Services requests that arrive at or before `t` and issues every DRAM
  /// refresh due at or before `t`.
  void advance_to(Tick t);

  /// Issues the DRAM refresh due at the current time, if any. Always false
  /// for STT devices.
  bool auto_refresh(Tick now);

  /// Explicit REF on `rank` no earlier than `at`, precharging open banks.
  /// On STT this flushes BUFFER banks; with nothing to flush it is a no-op
  /// and returns false.
  bool refresh(std::uint32_t rank, Tick at);

  /// Self-refresh for `duration` cycles followed by the exit latency. On
  /// STT, BUFFER banks are flushed on entry.
  void self_refresh(std::uint32_t rank, Tick at, Tick duration);

  /// Precharge power-down for `duration` cycles followed by the exit latency.
  void power_down(std::uint32_t rank, Tick at, Tick duration);

  /// Ends the simulation at max(min_end, last activity) and returns that
  /// tick. Issues remaining DRAM refreshes up to it.
  Tick finish(Tick min_end = 0);

  Tick clock() const { return clock_; }
  const CommandLog& log() const { return log_; }
  const std::vector<MemoryRequest>& requests() const { return requests_; }
  const std::vector<RankState>& ranks() const { return ranks_; }

  std::uint64_t row_hits() const { return row_hits_; }
  std::uint64_t row_misses() const { return row_misses_; }

 private:
  struct Burst {
    std::size_t request;
    Tick arrival;
    DecodedAddress addr;
    bool write;
  };

  struct BankTiming {
    Tick next_act = 0;
    Tick next_col = 0;
    Tick next_pre = 0;
  };

  bool step(std::optional<Tick> limit);
  void service(std::size_t queue_index, Tick now);
  void do_refresh();
  Tick precharge_rank(std::uint32_t rank, Tick t);
  void issue(const Command& cmd);
  BankTiming& timing_of(std::uint32_t rank, std::uint32_t bank) {
    return bank_timing_[rank * dev_.banks_per_rank + bank];
  }

  DeviceParams dev_;
  AddressMap map_;
  SchedulerPolicy sched_;

  Tick t_rcd_, t_cl_, t_cwl_, t_ras_, t_rp_, t_burst_, t_wr_, t_st_;

  std::vector<RankState> ranks_;
  std::vector<BankTiming> bank_timing_;
  std::vector<Tick> rank_ready_;
  std::vector<Burst> queue_;  // sorted by arrival
  std::vector<MemoryRequest> requests_;
  std::vector<std::uint32_t> bursts_left_;
  CommandLog log_;

  Tick clock_ = 0;
  Tick bus_next_col_ = 0;
  Tick last_activity_ = 0;
  std::optional<Tick> next_refresh_;  // DRAM only
  std::uint64_t row_hits_ = 0;
  std::uint64_t row_misses_ = 0;
};

struct SimOptions {
  AddressPolicy addr = AddressPolicy::RoRaBaCo;
  SchedulerPolicy sched = SchedulerPolicy::FrFcfs;
  Tick min_end_tick = 0;
};

struct SimResult {
  CommandLog log;
  std::vector<MemoryRequest> requests;
  std::vector<RankState> ranks;
  Tick sim_cycles = 0;
  std::uint64_t row_hits = 0;
  std::uint64_t row_misses = 0;
};

/// Replays `trace` (sorted by arrival) to completion.
SimResult run(const DeviceParams& dev, std::span<const MemoryRequest> trace,
              const SimOptions& opts = {});

}  // namespace memsim
