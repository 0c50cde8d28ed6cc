#pragma once

#include <cstdint>
#include <string_view>

#include "memsim/device.hpp"

namespace memsim {

enum class AddressPolicy {
  RoRaBaCo,  ///< row | rank | bank | column | byte (row in the high bits)
  RoBaRaCo,  ///< row | bank | rank | column | byte
};

/// Parses "rorabaco" / "robaraco" (case-insensitive). Throws InputError.
AddressPolicy parse_address_policy(std::string_view text);
std::string_view to_string(AddressPolicy p);

struct DecodedAddress {
  std::uint32_t rank = 0;
  std::uint32_t bank = 0;
  RowIndex row = 0;
  std::uint32_t column = 0;

  bool operator==(const DecodedAddress&) const = default;
};

/// Bit-field address decoder. All geometry counts must be powers of two.
class AddressMap {
 public:
  AddressMap(const DeviceParams& dev, AddressPolicy policy = AddressPolicy::RoRaBaCo);

  AddressPolicy policy() const { return policy_; }
  std::uint64_t capacity() const { return capacity_; }

  /// Throws std::out_of_range for addr >= capacity().
  DecodedAddress decode(std::uint64_t addr) const;
  /// Byte address of the first byte of column `d.column`. Throws
  /// std::out_of_range for fields outside the geometry.
  std::uint64_t encode(const DecodedAddress& d) const;

  unsigned byte_bits() const { return byte_bits_; }
  unsigned column_bits() const { return column_bits_; }
  unsigned bank_bits() const { return bank_bits_; }
  unsigned rank_bits() const { return rank_bits_; }
  unsigned row_bits() const { return row_bits_; }

 private:
  AddressPolicy policy_;
  std::uint64_t capacity_;
  unsigned byte_bits_, column_bits_, bank_bits_, rank_bits_, row_bits_;
  unsigned bank_shift_, rank_shift_, row_shift_;
};

}  // namespace memsim
