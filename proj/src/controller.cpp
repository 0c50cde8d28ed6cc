#include "memsim/controller.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace memsim {

SchedulerPolicy parse_scheduler_policy(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "frfcfs" || s == "fr-fcfs") return SchedulerPolicy::FrFcfs;
  if (s == "fcfs") return SchedulerPolicy::Fcfs;
  throw InputError("unknown scheduler '" + std::string(text) + "'");
}

std::string_view to_string(SchedulerPolicy p) {
  return p == SchedulerPolicy::FrFcfs ? "frfcfs" : "fcfs";
}

Controller::Controller(DeviceParams dev, AddressPolicy addr, SchedulerPolicy sched)
    : dev_(std::move(dev)),
      map_(dev_, addr),
      sched_(sched),
      t_rcd_(dev_.timing("tRCD")),
      t_cl_(dev_.timing("tCL")),
      t_cwl_(dev_.timing("tCWL")),
      t_ras_(dev_.timing("tRAS")),
      t_rp_(dev_.timing("tRP")),
      t_burst_(dev_.timing("tBURST")),
      t_wr_(dev_.timing("tWR")),
      t_st_(dev_.store_cycles()),
      bank_timing_(std::size_t{dev_.ranks} * dev_.banks_per_rank),
      rank_ready_(dev_.ranks, 0) {
  ranks_.reserve(dev_.ranks);
  for (std::uint32_t r = 0; r < dev_.ranks; ++r)
    ranks_.emplace_back(dev_.banks_per_rank,
                        RankState::Timing{dev_.refresh_cycles(), dev_.exit_latency()});
  if (dev_.kind == DeviceKind::Dram) next_refresh_ = dev_.timing("tREFI");
}

std::size_t Controller::burst_count(const MemoryRequest& req) const {
  if (req.size_bytes == 0) return 0;
  const std::uint64_t bb = dev_.burst_bytes();
  return (req.address + req.size_bytes - 1) / bb - req.address / bb + 1;
}

bool Controller::enqueue(MemoryRequest req) {
  if (req.size_bytes == 0) return false;
  if (req.address + req.size_bytes - 1 >= map_.capacity() ||
      req.address + req.size_bytes < req.address)
    throw std::out_of_range("request [" + std::to_string(req.address) + ", +" +
                            std::to_string(req.size_bytes) + ") beyond capacity");

  const std::uint64_t bb = dev_.burst_bytes();
  const std::size_t index = requests_.size();
  const std::size_t n = burst_count(req);
  req.completion_tick.reset();
  req.row_hit = true;
  requests_.push_back(req);
  bursts_left_.push_back(static_cast<std::uint32_t>(n));

  auto pos = std::upper_bound(queue_.begin(), queue_.end(), req.arrival_tick,
                              [](Tick t, const Burst& b) { return t < b.arrival; });
  std::vector<Burst> bursts;
  bursts.reserve(n);
  for (std::uint64_t chunk = req.address / bb; bursts.size() < n; ++chunk)
    bursts.push_back({index, req.arrival_tick, map_.decode(chunk * bb),
                      req.kind == RequestKind::Write});
  queue_.insert(pos, bursts.begin(), bursts.end());
  return true;
}

void Controller::issue(const Command& cmd) {
  if (cmd.issue_tick < clock_)
    throw InternalError("command " + std::string(to_string(cmd.kind)) + " at tick " +
                        std::to_string(cmd.issue_tick) + " before clock " +
                        std::to_string(clock_));
  ranks_[cmd.rank].transition(cmd, cmd.issue_tick);
  log_.push_back(cmd);
  clock_ = cmd.issue_tick;
}

bool Controller::step(std::optional<Tick> limit) {
  std::optional<Tick> burst_at;
  if (!queue_.empty() && (!limit || queue_.front().arrival <= *limit))
    burst_at = std::max(clock_, queue_.front().arrival);

  bool refresh_due = false;
  if (next_refresh_)
    refresh_due = limit ? *next_refresh_ <= *limit && (!burst_at || *next_refresh_ <= *burst_at)
                        : burst_at && *next_refresh_ <= *burst_at;

  if (refresh_due) {
    do_refresh();
    return true;
  }
  if (!burst_at) return false;

  const Tick now = *burst_at;
  std::size_t pick = 0;
  if (sched_ == SchedulerPolicy::FrFcfs) {
    for (std::size_t i = 0; i < queue_.size() && queue_[i].arrival <= now; ++i) {
      const Burst& b = queue_[i];
      if (ranks_[b.addr.rank].bank(b.addr.bank).open_row == b.addr.row) {
        pick = i;
        break;
      }
    }
  }
  service(pick, now);
  return true;
}

void Controller::service(std::size_t queue_index, Tick now) {
  const Burst b = queue_[queue_index];
  queue_.erase(queue_.begin() + static_cast<std::ptrdiff_t>(queue_index));

  const auto [r, bk, row, col] = b.addr;
  BankState& bank = ranks_[r].bank(bk);
  BankTiming& bt = timing_of(r, bk);

  Tick t = std::max({now, clock_, rank_ready_[r]});
  const bool hit = bank.open_row == row;

  if (bank.open_row && !hit) {
    t = std::max(t, bt.next_pre);
    issue({CommandKind::Pre, r, bk, *bank.open_row, t});
    bank.open_row.reset();
    bt.next_act = t + t_rp_;
  }

  if (!hit) {
    t = std::max(t, bt.next_act);
    ActivateChoice choice{CommandKind::Act, 0};
    if (dev_.kind == DeviceKind::Stt) {
      choice = select_activate(bank, row, t_st_);
    } else {
      bank.open_row = row;
      bank.last_row = row;
    }
    issue({choice.kind, r, bk, row, t, choice.extra_delay, true});
    bt.next_col = t + choice.extra_delay + t_rcd_;
    bt.next_pre = t + choice.extra_delay + t_ras_;
  }

  t = std::max({t, bt.next_col, bus_next_col_});
  issue({b.write ? CommandKind::Wr : CommandKind::Rd, r, bk, row, t});
  bus_next_col_ = t + t_burst_;

  Tick done;
  if (b.write) {
    done = t + t_cwl_ + t_burst_;
    bt.next_pre = std::max(bt.next_pre, done + t_wr_);
    bank.busy_until = std::max(bank.busy_until, done + t_wr_);
  } else {
    done = t + t_cl_ + t_burst_;
    bt.next_pre = std::max(bt.next_pre, t + t_burst_);
    bank.busy_until = std::max(bank.busy_until, done);
  }
  last_activity_ = std::max(last_activity_, bank.busy_until);

  MemoryRequest& req = requests_[b.request];
  req.completion_tick = std::max(req.completion_tick.value_or(0), done);
  if (!hit) req.row_hit = false;
  if (--bursts_left_[b.request] == 0) {
    if (req.row_hit) ++row_hits_;
    else ++row_misses_;
  }
}

Tick Controller::precharge_rank(std::uint32_t rank, Tick t) {
  for (std::uint32_t bk = 0; bk < dev_.banks_per_rank; ++bk) {
    BankState& bank = ranks_[rank].bank(bk);
    if (!bank.open_row) continue;
    BankTiming& bt = timing_of(rank, bk);
    t = std::max(t, bt.next_pre);
    issue({CommandKind::Pre, rank, bk, *bank.open_row, t});
    bank.open_row.reset();
    bt.next_act = t + t_rp_;
  }
  for (std::uint32_t bk = 0; bk < dev_.banks_per_rank; ++bk)
    t = std::max(t, timing_of(rank, bk).next_act);
  return std::max(t, rank_ready_[rank]);
}

void Controller::do_refresh() {
  const Tick t_rfc = dev_.refresh_cycles();
  Tick t = std::max(clock_, *next_refresh_);
  for (std::uint32_t r = 0; r < dev_.ranks; ++r) {
    t = precharge_rank(r, t);
    issue({CommandKind::Ref, r, 0, 0, t});
    rank_ready_[r] = t + t_rfc;
    for (std::uint32_t bk = 0; bk < dev_.banks_per_rank; ++bk)
      timing_of(r, bk).next_act = rank_ready_[r];
    last_activity_ = std::max(last_activity_, rank_ready_[r]);
  }
  *next_refresh_ += dev_.timing("tREFI");
}

void Controller::drain() {
  while (!queue_.empty()) step(std::nullopt);
}

void Controller::advance_to(Tick t) {
  while (step(t)) {
  }
}

bool Controller::auto_refresh(Tick now) {
  if (!next_refresh_ || *next_refresh_ > now) return false;
  do_refresh();
  return true;
}

bool Controller::refresh(std::uint32_t rank, Tick at) {
  RankState& rs = ranks_.at(rank);
  if (dev_.kind == DeviceKind::Stt) {
    const bool any_buffer = std::any_of(rs.banks().begin(), rs.banks().end(), [](const BankState& b) {
      return b.storing_state == StoringState::Buffer;
    });
    if (!any_buffer) return false;
  }
  Tick t = precharge_rank(rank, std::max({at, clock_, rank_ready_[rank]}));
  Command cmd{CommandKind::Ref, rank, 0, 0, t};
  if (dev_.kind == DeviceKind::Stt) cmd.flushed_banks = flush_all(rs.banks());
  issue(cmd);
  rank_ready_[rank] = t + dev_.refresh_cycles();
  for (std::uint32_t bk = 0; bk < dev_.banks_per_rank; ++bk)
    timing_of(rank, bk).next_act = rank_ready_[rank];
  last_activity_ = std::max(last_activity_, rank_ready_[rank]);
  return true;
}

void Controller::self_refresh(std::uint32_t rank, Tick at, Tick duration) {
  RankState& rs = ranks_.at(rank);
  Tick t = precharge_rank(rank, std::max({at, clock_, rank_ready_[rank]}));
  Command cmd{CommandKind::Sref, rank, 0, 0, t};
  if (dev_.kind == DeviceKind::Stt) cmd.flushed_banks = flush_all(rs.banks());
  issue(cmd);
  const Tick exit = t + duration;
  issue({CommandKind::PdnExit, rank, 0, 0, exit});
  rank_ready_[rank] = exit + dev_.exit_latency();
  for (std::uint32_t bk = 0; bk < dev_.banks_per_rank; ++bk)
    timing_of(rank, bk).next_act = rank_ready_[rank];
  last_activity_ = std::max(last_activity_, rank_ready_[rank]);
  // Self-refresh keeps DRAM contents alive on its own.
  if (next_refresh_)
    while (*next_refresh_ <= exit) *next_refresh_ += dev_.timing("tREFI");
}

void Controller::power_down(std::uint32_t rank, Tick at, Tick duration) {
  if (rank >= dev_.ranks) throw std::out_of_range("rank " + std::to_string(rank));
  Tick t = precharge_rank(rank, std::max({at, clock_, rank_ready_[rank]}));
  issue({CommandKind::PdnEnter, rank, 0, 0, t});
  const Tick exit = t + duration;
  issue({CommandKind::PdnExit, rank, 0, 0, exit});
  rank_ready_[rank] = exit + dev_.exit_latency();
  for (std::uint32_t bk = 0; bk < dev_.banks_per_rank; ++bk)
    timing_of(rank, bk).next_act = rank_ready_[rank];
  last_activity_ = std::max(last_activity_, rank_ready_[rank]);
}

Tick Controller::finish(Tick min_end) {
  drain();
  const Tick base = std::max({min_end, clock_, last_activity_});
  advance_to(base);
  const Tick end = std::max({base, clock_, last_activity_});
  for (auto& rank : ranks_) rank.advance(end);
  return end;
}

SimResult run(const DeviceParams& dev, std::span<const MemoryRequest> trace, const SimOptions& opts) {
  Controller ctrl(dev, opts.addr, opts.sched);
  for (const auto& req : trace) ctrl.enqueue(req);
  ctrl.drain();
  SimResult result;
  result.sim_cycles = ctrl.finish(opts.min_end_tick);
  result.log = ctrl.log();
  result.requests = ctrl.requests();
  result.ranks = ctrl.ranks();
  result.row_hits = ctrl.row_hits();
  result.row_misses = ctrl.row_misses();
  return result;
}

}  // namespace memsim
