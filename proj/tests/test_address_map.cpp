#include <gtest/gtest.h>

#include <random>

#include "memsim/address_map.hpp"
#include "test_util.hpp"

using namespace memsim;

TEST(AddressMap, ShippedGeometryBits) {
  const AddressMap m(test::stt_device());
  EXPECT_EQ(m.byte_bits(), 1u);
  EXPECT_EQ(m.column_bits(), 10u);
  EXPECT_EQ(m.bank_bits(), 3u);
  EXPECT_EQ(m.rank_bits(), 0u);
  EXPECT_EQ(m.row_bits(), 13u);
  EXPECT_EQ(m.capacity(), std::uint64_t{1} << 27);
}

TEST(AddressMap, RoRaBaCoLayout) {
  const AddressMap m(test::small_stt(2), AddressPolicy::RoRaBaCo);
  // byte 1 | column 6 | bank 2 | rank 1 | row 4
  EXPECT_EQ(m.decode(0x2), (DecodedAddress{0, 0, 0, 1}));
  EXPECT_EQ(m.decode(0x80), (DecodedAddress{0, 1, 0, 0}));
  EXPECT_EQ(m.decode(0x200), (DecodedAddress{1, 0, 0, 0}));
  EXPECT_EQ(m.decode(0x400), (DecodedAddress{0, 0, 1, 0}));
  EXPECT_EQ(m.decode(m.capacity() - 1), (DecodedAddress{1, 3, 15, 63}));
}

TEST(AddressMap, RoBaRaCoLayout) {
  const AddressMap m(test::small_stt(2), AddressPolicy::RoBaRaCo);
  EXPECT_EQ(m.decode(0x80), (DecodedAddress{1, 0, 0, 0}));
  EXPECT_EQ(m.decode(0x100), (DecodedAddress{0, 1, 0, 0}));
  EXPECT_EQ(m.decode(0x400), (DecodedAddress{0, 0, 1, 0}));
}

TEST(AddressMap, EncodeDecodeRoundTrip) {
  std::mt19937_64 rng(5);
  for (auto policy : {AddressPolicy::RoRaBaCo, AddressPolicy::RoBaRaCo}) {
    const AddressMap m(test::small_stt(2), policy);
    for (int i = 0; i < 1000; ++i) {
      const std::uint64_t addr = rng() % m.capacity() & ~std::uint64_t{1};
      EXPECT_EQ(m.encode(m.decode(addr)), addr);
    }
  }
}

TEST(AddressMap, Errors) {
  const AddressMap m(test::small_stt(2));
  EXPECT_THROW(m.decode(m.capacity()), std::out_of_range);
  EXPECT_THROW(m.encode({2, 0, 0, 0}), std::out_of_range);
  EXPECT_THROW(m.encode({0, 4, 0, 0}), std::out_of_range);
  EXPECT_THROW(m.encode({0, 0, 16, 0}), std::out_of_range);
  EXPECT_THROW(m.encode({0, 0, 0, 64}), std::out_of_range);

  DeviceParams odd = test::small_stt(2);
  odd.banks_per_rank = 6;
  EXPECT_THROW(AddressMap{odd}, InputError);
}

TEST(AddressMap, PolicyNames) {
  EXPECT_EQ(parse_address_policy("RoRaBaCo"), AddressPolicy::RoRaBaCo);
  EXPECT_EQ(parse_address_policy("robaraco"), AddressPolicy::RoBaRaCo);
  EXPECT_EQ(to_string(AddressPolicy::RoBaRaCo), "robaraco");
  EXPECT_THROW(parse_address_policy("chrobaco"), InputError);
}
