#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "memsim/controller.hpp"
#include "memsim/power.hpp"
#include "test_util.hpp"

using namespace memsim;

namespace {

Command make(CommandKind k, std::uint32_t rank, std::uint32_t bank, std::uint64_t flushed = 0) {
  Command c;
  c.kind = k;
  c.rank = rank;
  c.bank = bank;
  c.flushed_banks = flushed;
  return c;
}

void expect_rel(double actual, double expected, double tol) {
  EXPECT_LE(std::abs(actual - expected), tol * std::abs(expected))
      << "actual " << actual << " expected " << expected;
}

}  // namespace

TEST(Counters, HandleActAndActSt) {
  CommandCounters c(2, 4);
  handle_act(1, 2, c);
  handle_act_st(1, 2, true, c);
  EXPECT_EQ(c.n_of_acts_banks[1][2], 2u);
  EXPECT_EQ(c.n_of_stores_banks[1][2], 1u);
  EXPECT_EQ(c.acts(1), 2u);
  EXPECT_EQ(c.stores(1), 1u);
  EXPECT_EQ(c.acts(0), 0u);
  EXPECT_THROW(handle_act_st(0, 0, false, c), InternalError);
  EXPECT_THROW(handle_act(2, 0, c), std::out_of_range);
}

TEST(Counters, EvaluateCommandsCountsEveryKind) {
  const CommandLog log = {
      make(CommandKind::Act, 0, 1),    make(CommandKind::Rd, 0, 1),
      make(CommandKind::Wr, 0, 1),     make(CommandKind::Pre, 0, 1),
      make(CommandKind::ActSt, 0, 1),  make(CommandKind::Pre, 0, 1),
      make(CommandKind::Ref, 0, 0, 0b11), make(CommandKind::Sref, 1, 0, 0b100),
      make(CommandKind::PdnExit, 1, 0), make(CommandKind::PdnEnter, 1, 0),
  };
  const auto c = evaluate_commands(log, 2, 4);
  EXPECT_EQ(c.n_of_acts_banks[0][1], 2u);
  EXPECT_EQ(c.n_of_stores_banks[0][0], 1u);
  EXPECT_EQ(c.n_of_stores_banks[0][1], 2u);
  EXPECT_EQ(c.n_of_stores_banks[1][2], 1u);
  EXPECT_EQ(c.n_rd[0], 1u);
  EXPECT_EQ(c.n_wr[0], 1u);
  EXPECT_EQ(c.n_ref[0], 1u);
  EXPECT_EQ(c.n_sref[1], 1u);
}

TEST(Counters, SegmentedEvaluationIsAdditive) {
  std::mt19937_64 rng(21);
  CommandLog log;
  for (int i = 0; i < 1000; ++i) {
    const auto k = static_cast<CommandKind>(rng() % 9);
    log.push_back(make(k, rng() % 2, rng() % 4, k == CommandKind::Ref ? rng() % 16 : 0));
  }
  const auto whole = evaluate_commands(log, 2, 4);
  CommandCounters parts(2, 4);
  const std::span<const Command> s(log);
  evaluate_commands(s.first(333), parts);
  evaluate_commands(s.subspan(333), parts);
  EXPECT_EQ(parts, whole);
  CommandCounters sum = evaluate_commands(s.first(500), 2, 4);
  sum += evaluate_commands(s.subspan(500), 2, 4);
  EXPECT_EQ(sum, whole);
}

TEST(Counters, UnknownCommandKindThrows) {
  Command bad = make(CommandKind::Act, 0, 0);
  bad.kind = static_cast<CommandKind>(42);
  EXPECT_THROW(evaluate_commands(std::vector{bad}, 1, 1), InternalError);
}

TEST(Energy, CalcOracle) {
  const DeviceParams dev = test::stt_device();
  // 254 cycles * 1.5 ns * 0.392 A * 1.2 V
  expect_rel(calc(254, 0.392, dev), 1.792224e-7, 1e-12);
  EXPECT_EQ(calc(0, 1.0, dev), 0.0);
  EXPECT_THROW(calc(-1, 1.0, dev), InternalError);
  EXPECT_THROW(calc(1, -1.0, dev), InternalError);
}

TEST(Energy, StoreEnergyOracleAndLinearity) {
  DeviceParams dev = test::stt_device();
  CommandCounters c(1, 8);
  handle_act_st(0, 3, true, c);
  expect_rel(store_energy(c, 0, dev), 1.792224e-7, 1e-12);
  for (int i = 0; i < 6; ++i) handle_act_st(0, i % 8, true, c);
  expect_rel(store_energy(c, 0, dev), 7 * 1.792224e-7, 1e-12);
  const double e7 = store_energy(c, 0, dev);
  dev.vdd *= 1.05;
  expect_rel(store_energy(c, 0, dev), 1.05 * e7, 1e-12);
  EXPECT_EQ(store_energy(c, 0, test::dram_device()), 0.0);
}

TEST(Energy, RankEnergyComponents) {
  const DeviceParams dev = test::dram_device();
  CommandCounters c(1, 8);
  handle_act(0, 0, c);
  c.n_rd[0] = 3;
  c.n_wr[0] = 2;
  c.n_ref[0] = 1;
  StateTimes t{};
  at(t, PowerState::Act) = 100;
  at(t, PowerState::Ref) = 192;
  at(t, PowerState::Idle) = 700;
  at(t, PowerState::Pdn) = 8;
  const double tck = 1.0 / 1.2e9, v = 1.2;
  const auto e = rank_energy(c, 0, t, 1000, dev);
  expect_rel(e.act_energy, 39 * tck * (0.060 - 0.044) * v, 1e-12);
  expect_rel(e.refresh_energy, 192 * tck * (0.190 - 0.044) * v, 1e-12);
  expect_rel(e.rdwr_energy, (3 * 4 * (0.140 - 0.044) + 2 * 4 * (0.130 - 0.044)) * tck * v, 1e-12);
  expect_rel(e.background_energy, (292 * 0.044 + 700 * 0.033) * tck * v, 1e-12);
  expect_rel(e.powerdown_energy, 8 * 0.025 * tck * v, 1e-12);
  EXPECT_EQ(e.store_energy, 0.0);
  expect_rel(e.total, e.act_energy + e.refresh_energy + e.rdwr_energy + e.background_energy +
                          e.powerdown_energy, 1e-15);
  expect_rel(e.avg_power, e.total / (1000 * tck), 1e-12);
}

TEST(Energy, FullBreakdownSumsRanks) {
  const DeviceParams dev = test::small_stt(2);
  const AddressMap m(dev);
  std::vector<MemoryRequest> trace;
  for (std::uint32_t i = 0; i < 40; ++i)
    trace.push_back({i * 50, i % 3 ? RequestKind::Read : RequestKind::Write,
                     m.encode({i % 2, i % 4, i % 5, 0}), 16, std::nullopt, false});
  const SimResult res = run(dev, trace);
  std::vector<StateTimes> times;
  for (const auto& r : res.ranks) times.push_back(r.state_time_report(res.sim_cycles));
  const EnergyReport rep = full_breakdown(res.log, times, res.sim_cycles, dev);
  ASSERT_EQ(rep.ranks.size(), 2u);
  expect_rel(rep.total.total, rep.ranks[0].total + rep.ranks[1].total, 1e-12);
  expect_rel(rep.total.store_energy, rep.ranks[0].store_energy + rep.ranks[1].store_energy, 1e-12);
  EXPECT_GT(rep.total.store_energy, 0.0);
  EXPECT_EQ(rep.total.refresh_energy, 0.0);
  EXPECT_THROW(full_breakdown(res.log, std::span(times).first(1), res.sim_cycles, dev),
               InternalError);
}
