#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "memsim/common.hpp"

namespace memsim {

/// Whether a bank's page buffer has been written back to the persistent
/// STT array.
enum class StoringState : std::uint8_t { Buffer, Persistent };

struct BankState {
  StoringState storing_state = StoringState::Persistent;
  RowIndex last_row = 0;
  std::optional<RowIndex> open_row;  // nullopt: precharged
  Tick busy_until = 0;

  bool precharged() const { return !open_row.has_value(); }
};

enum class PowerState : std::uint8_t { Idle, Act, ActSt, Ref, Sref, Pdn, Pup };
inline constexpr std::size_t kNumPowerStates = 7;
inline constexpr std::array<PowerState, kNumPowerStates> kAllPowerStates = {
    PowerState::Idle, PowerState::Act, PowerState::ActSt, PowerState::Ref,
    PowerState::Sref, PowerState::Pdn, PowerState::Pup};

/// "PWR_IDLE", "PWR_ACT", ...
std::string_view to_string(PowerState s);

enum class CommandKind : std::uint8_t { Act, ActSt, Rd, Wr, Pre, Ref, Sref, PdnEnter, PdnExit };

std::string_view to_string(CommandKind k);

struct Command {
  CommandKind kind = CommandKind::Act;
  std::uint32_t rank = 0;
  std::uint32_t bank = 0;
  RowIndex row = 0;
  Tick issue_tick = 0;
  Tick extra_delay = 0;  // tST for ACT_ST, otherwise 0
  /// Target bank was precharged when an ACT/ACT_ST issued.
  bool bank_precharged = true;
  /// REF/SREF: bit b set when bank b was flushed BUFFER -> PERSISTENT.
  std::uint64_t flushed_banks = 0;

  bool operator==(const Command&) const = default;
};

using CommandLog = std::vector<Command>;

/// Accumulated cycles per power state, indexed by PowerState.
using StateTimes = std::array<Tick, kNumPowerStates>;

inline Tick& at(StateTimes& t, PowerState s) { return t[static_cast<std::size_t>(s)]; }
inline Tick at(const StateTimes& t, PowerState s) { return t[static_cast<std::size_t>(s)]; }

// ---------------------------------------------------------------------------
// Storing-state lifecycle
// ---------------------------------------------------------------------------

struct ActivateChoice {
  CommandKind kind;  // Act or ActSt
  Tick extra_delay;
};

/// Chooses between ACT and ACT_ST for opening `row` on a precharged bank and
/// updates the bank: ACT_ST iff the bank is in BUFFER state and `row` differs
/// from the last activated row. Afterwards the bank is in BUFFER state with
/// `row` open and recorded as last row.
///
/// Throws InternalError if the bank already has an open row.
ActivateChoice select_activate(BankState& bank, RowIndex row, Tick store_cycles);

/// Persists the page buffer of one bank. Returns false if it was already
/// PERSISTENT.
bool store_bank(BankState& bank);

/// Persists every BUFFER bank (REF/SREF semantics) and returns a bit mask of
/// the flushed banks. A zero mask means the refresh had nothing to store.
/// Throws InternalError if any bank is open.
std::uint64_t flush_all(std::span<BankState> banks);

// ---------------------------------------------------------------------------
// Rank power state machine
// ---------------------------------------------------------------------------

/// Per-rank power state machine with dwell-time accounting.
///
/// Transitions (rank granularity):
///   IDLE   --ACT-->    ACT          IDLE --ACT_ST--> ACT_ST
///   ACT    --ACT/RD/WR--> ACT       ACT  --ACT_ST--> ACT_ST
///   ACT_ST --ACT/ACT_ST/RD/WR--> ACT_ST, back to ACT once every store ends
///   ACT*   --PRE (last open bank)--> IDLE
///   IDLE   --REF-->    REF  --(refresh time)--> IDLE
///   IDLE   --SREF-->   SREF --PDN_EXIT--> PUP --(exit latency)--> IDLE
///   IDLE   --PDN_ENTER--> PDN --PDN_EXIT--> PUP --(exit latency)--> IDLE
class RankState {
 public:
  struct Timing {
    Tick refresh = 0;       // time spent in PWR_REF
    Tick exit_latency = 0;  // time spent in PWR_PUP
  };

  struct Entry {
    Tick tick;
    PowerState state;
    bool operator==(const Entry&) const = default;
  };

  RankState(std::uint32_t banks, Timing timing);

  PowerState power_state() const { return state_; }
  Tick last_transition_tick() const { return last_transition_; }
  std::uint32_t open_banks() const { return open_banks_; }

  std::span<BankState> banks() { return banks_; }
  std::span<const BankState> banks() const { return banks_; }
  BankState& bank(std::uint32_t b) { return banks_.at(b); }
  const BankState& bank(std::uint32_t b) const { return banks_.at(b); }

  /// Tick at which the current timed state (ACT_ST, REF, PUP) ends, if any.
  std::optional<Tick> pending_until() const { return pending_until_; }

  /// Fires timed transitions that are due at or before `now`.
  void advance(Tick now);

  /// Applies `cmd` at tick `now` and returns the resulting power state.
  /// Throws InternalError naming (state, command) for an illegal transition
  /// or when `now` precedes the last transition.
  PowerState transition(const Command& cmd, Tick now);

  /// Dwell time per state up to `now`, including the in-progress interval.
  /// Values sum to `now`.
  StateTimes state_time_report(Tick now) const;

  /// Every state entry in order, starting with (0, PWR_IDLE).
  const std::vector<Entry>& history() const { return history_; }

 private:
  void enter(PowerState next, Tick now);

  std::vector<BankState> banks_;
  Timing timing_;
  PowerState state_ = PowerState::Idle;
  Tick last_transition_ = 0;
  StateTimes state_time_{};
  std::uint32_t open_banks_ = 0;
  std::optional<Tick> pending_until_;
  std::vector<Entry> history_;
};

/// Dwell time per state over [0, t] reconstructed from a rank's entry
/// history. `t` may lie anywhere at or after the first entry.
StateTimes state_times_at(std::span<const RankState::Entry> history, Tick t);

}  // namespace memsim
