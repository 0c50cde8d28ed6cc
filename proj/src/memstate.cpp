#include "memsim/memstate.hpp"

#include <algorithm>
#include <bit>
#include <string>

namespace memsim {

std::string_view to_string(PowerState s) {
  switch (s) {
    case PowerState::Idle: return "PWR_IDLE";
    case PowerState::Act: return "PWR_ACT";
    case PowerState::ActSt: return "PWR_ACT_ST";
    case PowerState::Ref: return "PWR_REF";
    case PowerState::Sref: return "PWR_SREF";
    case PowerState::Pdn: return "PWR_PDN";
    case PowerState::Pup: return "PWR_PUP";
  }
  return "?";
}

std::string_view to_string(CommandKind k) {
  switch (k) {
    case CommandKind::Act: return "ACT";
    case CommandKind::ActSt: return "ACT_ST";
    case CommandKind::Rd: return "RD";
    case CommandKind::Wr: return "WR";
    case CommandKind::Pre: return "PRE";
    case CommandKind::Ref: return "REF";
    case CommandKind::Sref: return "SREF";
    case CommandKind::PdnEnter: return "PDN_ENTER";
    case CommandKind::PdnExit: return "PDN_EXIT";
  }
  return "?";
}

ActivateChoice select_activate(BankState& bank, RowIndex row, Tick store_cycles) {
  if (bank.open_row)
    throw InternalError("activate on bank with open row " + std::to_string(*bank.open_row));

  ActivateChoice choice{CommandKind::Act, 0};
  if (bank.last_row != row && bank.storing_state == StoringState::Buffer)
    choice = {CommandKind::ActSt, store_cycles};

  bank.last_row = row;
  bank.storing_state = StoringState::Buffer;
  bank.open_row = row;
  return choice;
}

bool store_bank(BankState& bank) {
  if (bank.storing_state == StoringState::Persistent) return false;
  bank.storing_state = StoringState::Persistent;
  return true;
}

std::uint64_t flush_all(std::span<BankState> banks) {
  for (const auto& b : banks)
    if (b.open_row) throw InternalError("flush with an open bank");
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < banks.size(); ++i)
    if (store_bank(banks[i])) mask |= std::uint64_t{1} << i;
  return mask;
}

RankState::RankState(std::uint32_t banks, Timing timing)
    : banks_(banks), timing_(timing), history_{{0, PowerState::Idle}} {}

void RankState::enter(PowerState next, Tick now) {
  if (next == state_) return;
  state_time_[static_cast<std::size_t>(state_)] += now - last_transition_;
  last_transition_ = now;
  state_ = next;
  history_.push_back({now, next});
}

void RankState::advance(Tick now) {
  if (!pending_until_ || *pending_until_ > now) return;
  const Tick when = *pending_until_;
  pending_until_.reset();
  switch (state_) {
    case PowerState::ActSt: enter(PowerState::Act, when); break;
    case PowerState::Ref:
    case PowerState::Pup: enter(PowerState::Idle, when); break;
    default: break;
  }
}

PowerState RankState::transition(const Command& cmd, Tick now) {
  advance(now);
  auto illegal = [&]() -> PowerState {
    throw InternalError("illegal transition: " + std::string(to_string(state_)) + " + " +
                        std::string(to_string(cmd.kind)));
  };
  if (now < last_transition_)
    throw InternalError("transition at tick " + std::to_string(now) + " precedes tick " +
                        std::to_string(last_transition_));

  const bool active = state_ == PowerState::Act || state_ == PowerState::ActSt;
  switch (cmd.kind) {
    case CommandKind::Act:
      if (state_ != PowerState::Idle && !active) return illegal();
      ++open_banks_;
      if (state_ == PowerState::Idle) enter(PowerState::Act, now);
      break;
    case CommandKind::ActSt:
      if (state_ != PowerState::Idle && !active) return illegal();
      ++open_banks_;
      pending_until_ = std::max(pending_until_.value_or(0), now + cmd.extra_delay);
      enter(PowerState::ActSt, now);
      break;
    case CommandKind::Rd:
    case CommandKind::Wr:
      if (!active || open_banks_ == 0) return illegal();
      break;
    case CommandKind::Pre:
      if (!active || open_banks_ == 0) return illegal();
      if (--open_banks_ == 0) {
        pending_until_.reset();
        enter(PowerState::Idle, now);
      }
      break;
    case CommandKind::Ref:
      if (state_ != PowerState::Idle) return illegal();
      pending_until_ = now + timing_.refresh;
      enter(PowerState::Ref, now);
      break;
    case CommandKind::Sref:
      if (state_ != PowerState::Idle) return illegal();
      enter(PowerState::Sref, now);
      break;
    case CommandKind::PdnEnter:
      if (state_ != PowerState::Idle) return illegal();
      enter(PowerState::Pdn, now);
      break;
    case CommandKind::PdnExit:
      if (state_ != PowerState::Pdn && state_ != PowerState::Sref) return illegal();
      pending_until_ = now + timing_.exit_latency;
      enter(PowerState::Pup, now);
      break;
  }
  return state_;
}

StateTimes RankState::state_time_report(Tick now) const {
  RankState copy = *this;
  copy.advance(now);
  StateTimes times = copy.state_time_;
  if (now > copy.last_transition_)
    times[static_cast<std::size_t>(copy.state_)] += now - copy.last_transition_;
  return times;
}

StateTimes state_times_at(std::span<const RankState::Entry> history, Tick t) {
  StateTimes times{};
  for (std::size_t i = 0; i < history.size(); ++i) {
    const Tick begin = history[i].tick;
    if (begin >= t) break;
    const Tick end = i + 1 < history.size() ? std::min(history[i + 1].tick, t) : t;
    times[static_cast<std::size_t>(history[i].state)] += end - begin;
  }
  return times;
}

}  // namespace memsim
