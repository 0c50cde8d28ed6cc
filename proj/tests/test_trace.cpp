#include <gtest/gtest.h>

#include <set>

#include "memsim/trace.hpp"
#include "test_util.hpp"

using namespace memsim;

TEST(SplitMix64, ReferenceOutputs) {
  SplitMix64 a(0);
  EXPECT_EQ(a.next(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(a.next(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(a.next(), 0x06c45d188009454fULL);
  SplitMix64 b(42);
  EXPECT_EQ(b.next(), 0xbdd732262feb6e95ULL);
  EXPECT_EQ(b.next(), 0x28efe333b266f103ULL);
}

TEST(SplitMix64, UnitInterval) {
  SplitMix64 r(0);
  EXPECT_DOUBLE_EQ(r.next_unit(), static_cast<double>(0xe220a8397b1dcdafULL >> 11) / 9007199254740992.0);
  for (int i = 0; i < 10000; ++i) {
    const double u = r.next_unit();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(TraceParse, Basic) {
  const auto recs = parse_trace(
      "# header\n"
      "0 R 0x0 64\n"
      "\n"
      "10 W 0xFF 16   # tail comment\n"
      "10 r 0xabc 1\n");
  ASSERT_EQ(recs.size(), 3u);
  EXPECT_EQ(recs[1], (TraceRecord{10, RequestKind::Write, 0xff, 16}));
  EXPECT_EQ(recs[2].kind, RequestKind::Read);
  EXPECT_EQ(recs[2].address, 0xabcu);
}

TEST(TraceParse, ErrorsReportLine) {
  auto line_of = [](const char* text) -> std::size_t {
    try {
      parse_trace(std::string_view(text));
    } catch (const InputError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("0 R 0x0 64\n1 X 0x0 64\n"), 2u);
  EXPECT_EQ(line_of("0 R 0x0 0\n"), 1u);
  EXPECT_EQ(line_of("0 R 10 64\n"), 1u);
  EXPECT_EQ(line_of("0 R 0xZZ 64\n"), 1u);
  EXPECT_EQ(line_of("0 R 0x0\n"), 1u);
  EXPECT_EQ(line_of("0 R 0x0 64 extra\n"), 1u);
  EXPECT_EQ(line_of("-1 R 0x0 64\n"), 1u);
  EXPECT_EQ(line_of("\n\n5 R 0x0 64\n4 R 0x0 64\n"), 4u);
  EXPECT_THROW(load_trace_file("/nonexistent/trace.txt"), InputError);
}

TEST(TraceParse, RoundTrip) {
  const AddressMap m(test::stt_device());
  const auto recs = generate({TracePattern::UniformRandom, 500, 0.4, 7, 9, 64}, m);
  EXPECT_EQ(parse_trace(serialize_trace(recs)), recs);
  EXPECT_EQ(serialize_trace(std::vector{TraceRecord{3, RequestKind::Write, 0xabc, 8}}), "3 W 0xABC 8\n");
}

TEST(TraceConvert, FloorsToCycles) {
  const DeviceParams dev = test::stt_device();  // 1.5 ns
  const std::vector<TraceRecord> recs = {
      {0, RequestKind::Read, 0, 16}, {1, RequestKind::Read, 0, 16},
      {3, RequestKind::Read, 0, 16}, {1500, RequestKind::Read, 0, 16}};
  const auto reqs = to_requests(recs, dev);
  EXPECT_EQ(reqs[0].arrival_tick, 0u);
  EXPECT_EQ(reqs[1].arrival_tick, 0u);
  EXPECT_EQ(reqs[2].arrival_tick, 2u);
  EXPECT_EQ(reqs[3].arrival_tick, 1000u);
  // 1000 ns on a 1200 MHz clock is exactly 1200 cycles despite rounding in tck.
  EXPECT_EQ(to_requests(std::vector{TraceRecord{1000, RequestKind::Read, 0, 16}},
                        test::dram_device())[0].arrival_tick,
            1200u);
}

TEST(Generator, Patterns) {
  const AddressMap m(test::stt_device());
  const auto same = generate({TracePattern::SameRow, 100, 0.0, 10, 1, 64}, m);
  for (std::size_t k = 0; k < same.size(); ++k) {
    EXPECT_EQ(same[k].timestamp_ns, k * 10);
    EXPECT_EQ(m.decode(same[k].address).row, 0u);
    EXPECT_EQ(m.decode(same[k].address).bank, 0u);
    EXPECT_EQ(same[k].kind, RequestKind::Read);
  }
  EXPECT_EQ(same[1].address, 64u);

  const auto alt = generate({TracePattern::RowAlternate, 6, 1.0, 10, 1, 64}, m);
  for (std::size_t k = 0; k < alt.size(); ++k) {
    const auto d = m.decode(alt[k].address);
    EXPECT_EQ(d, (DecodedAddress{0, 0, static_cast<RowIndex>(k % 2), 0}));
    EXPECT_EQ(alt[k].kind, RequestKind::Write);
  }

  const auto seq = generate({TracePattern::Sequential, 10, 0.0, 10, 1, 32}, m);
  EXPECT_EQ(seq[9].address, 9u * 32);

  const auto rnd = generate({TracePattern::UniformRandom, 2000, 0.5, 10, 1, 64}, m);
  std::set<std::uint64_t> distinct;
  std::size_t writes = 0;
  for (const auto& r : rnd) {
    EXPECT_EQ(r.address % 64, 0u);
    EXPECT_LT(r.address, m.capacity());
    distinct.insert(r.address);
    writes += r.kind == RequestKind::Write;
  }
  EXPECT_GT(distinct.size(), 1900u);
  EXPECT_GT(writes, 900u);
  EXPECT_LT(writes, 1100u);
}

TEST(Generator, DrawOrderIsKindThenAddress) {
  const AddressMap m(test::stt_device());
  const auto recs = generate({TracePattern::UniformRandom, 2, 0.5, 10, 42, 64}, m);
  SplitMix64 r(42);
  const double u0 = r.next_unit();
  const std::uint64_t a0 = r.next();
  const std::uint64_t slots = m.capacity() / 64;
  EXPECT_EQ(recs[0].kind, u0 < 0.5 ? RequestKind::Write : RequestKind::Read);
  EXPECT_EQ(recs[0].address, (a0 % slots) * 64);
  const double u1 = r.next_unit();
  EXPECT_EQ(recs[1].kind, u1 < 0.5 ? RequestKind::Write : RequestKind::Read);
  EXPECT_EQ(recs[1].address, (r.next() % slots) * 64);
}

TEST(Generator, DeterministicPerSeed) {
  const AddressMap m(test::stt_device());
  const SyntheticSpec s{TracePattern::UniformRandom, 300, 0.3, 5, 77, 64};
  EXPECT_EQ(generate(s, m), generate(s, m));
  SyntheticSpec other = s;
  other.seed = 78;
  EXPECT_NE(generate(s, m), generate(other, m));
}

TEST(Generator, InvalidSpecs) {
  const AddressMap m(test::stt_device());
  EXPECT_THROW(generate({TracePattern::Sequential, 1, 1.5, 10, 0, 64}, m), InputError);
  EXPECT_THROW(generate({TracePattern::Sequential, 1, -0.1, 10, 0, 64}, m), InputError);
  EXPECT_THROW(generate({TracePattern::Sequential, 1, 0.0, 10, 0, 0}, m), InputError);
  EXPECT_THROW(generate({TracePattern::SameRow, 1, 0.0, 10, 0, 4096}, m), InputError);
  EXPECT_TRUE(generate({TracePattern::Sequential, 0, 0.0, 10, 0, 64}, m).empty());
}

TEST(Generator, PatternNames) {
  for (auto p : {TracePattern::SameRow, TracePattern::RowAlternate, TracePattern::Sequential,
                 TracePattern::UniformRandom})
    EXPECT_EQ(parse_trace_pattern(to_string(p)), p);
  EXPECT_EQ(parse_trace_pattern("ROW-ALTERNATE"), TracePattern::RowAlternate);
  EXPECT_THROW(parse_trace_pattern("zigzag"), InputError);
}
