#include "memsim/address_map.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace memsim {

AddressPolicy parse_address_policy(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "rorabaco") return AddressPolicy::RoRaBaCo;
  if (s == "robaraco") return AddressPolicy::RoBaRaCo;
  throw InputError("unknown address map policy '" + std::string(text) + "'");
}

std::string_view to_string(AddressPolicy p) {
  return p == AddressPolicy::RoRaBaCo ? "rorabaco" : "robaraco";
}

namespace {

unsigned log2_exact(std::uint32_t v, const char* what) {
  if (!std::has_single_bit(v))
    throw InputError(std::string("address map needs a power-of-two ") + what + ", got " +
                     std::to_string(v));
  return static_cast<unsigned>(std::countr_zero(v));
}

std::uint64_t field(std::uint64_t addr, unsigned shift, unsigned bits) {
  return (addr >> shift) & ((std::uint64_t{1} << bits) - 1);
}

}  // namespace

AddressMap::AddressMap(const DeviceParams& dev, AddressPolicy policy)
    : policy_(policy),
      capacity_(dev.capacity_bytes()),
      byte_bits_(log2_exact(dev.bytes_per_column, "bytes_per_column")),
      column_bits_(log2_exact(dev.columns_per_row, "columns_per_row")),
      bank_bits_(log2_exact(dev.banks_per_rank, "banks_per_rank")),
      rank_bits_(log2_exact(dev.ranks, "ranks")),
      row_bits_(log2_exact(dev.rows_per_bank, "rows_per_bank")) {
  const unsigned low = byte_bits_ + column_bits_;
  if (policy_ == AddressPolicy::RoRaBaCo) {
    bank_shift_ = low;
    rank_shift_ = bank_shift_ + bank_bits_;
    row_shift_ = rank_shift_ + rank_bits_;
  } else {
    rank_shift_ = low;
    bank_shift_ = rank_shift_ + rank_bits_;
    row_shift_ = bank_shift_ + bank_bits_;
  }
  if (row_shift_ + row_bits_ > 63) throw InputError("address map: capacity exceeds 2^63 bytes");
}

DecodedAddress AddressMap::decode(std::uint64_t addr) const {
  if (addr >= capacity_)
    throw std::out_of_range("address 0x" + [&] {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%llx", static_cast<unsigned long long>(addr));
      return std::string(buf);
    }() + " beyond capacity");
  return {static_cast<std::uint32_t>(field(addr, rank_shift_, rank_bits_)),
          static_cast<std::uint32_t>(field(addr, bank_shift_, bank_bits_)),
          static_cast<RowIndex>(field(addr, row_shift_, row_bits_)),
          static_cast<std::uint32_t>(field(addr, byte_bits_, column_bits_))};
}

std::uint64_t AddressMap::encode(const DecodedAddress& d) const {
  if (d.rank >> rank_bits_ || d.bank >> bank_bits_ || d.row >> row_bits_ ||
      d.column >> column_bits_)
    throw std::out_of_range("address field outside device geometry");
  return (std::uint64_t{d.row} << row_shift_) | (std::uint64_t{d.rank} << rank_shift_) |
         (std::uint64_t{d.bank} << bank_shift_) | (std::uint64_t{d.column} << byte_bits_);
}

}  // namespace memsim
