#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "memsim/address_map.hpp"
#include "memsim/controller.hpp"

namespace memsim {

/// One line of a trace file: `<timestamp_ns> <R|W> <0xHEXADDR> <size_bytes>`.
struct TraceRecord {
  std::uint64_t timestamp_ns = 0;
  RequestKind kind = RequestKind::Read;
  std::uint64_t address = 0;
  std::uint32_t size_bytes = 0;

  bool operator==(const TraceRecord&) const = default;
};

/// Reads a trace. Blank lines and `#` comments are skipped; malformed lines
/// and decreasing timestamps throw InputError with the line number.
std::vector<TraceRecord> parse_trace(std::istream& in);
std::vector<TraceRecord> parse_trace(std::string_view text);
std::vector<TraceRecord> load_trace_file(const std::string& path);

void write_trace(std::ostream& out, std::span<const TraceRecord> records);
std::string serialize_trace(std::span<const TraceRecord> records);

/// Converts records to controller requests; timestamps are floored to
/// device cycles.
std::vector<MemoryRequest> to_requests(std::span<const TraceRecord> records,
                                       const DeviceParams& dev);

/// SplitMix64 (Steele, Lea, Flood 2014): state += 0x9E3779B97F4A7C15, then
/// the output mix z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
/// z = (z ^ (z >> 27)) * 0x94D049BB133111EB; z ^ (z >> 31).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) from the top 53 bits of next().
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

enum class TracePattern { SameRow, RowAlternate, Sequential, UniformRandom };

TracePattern parse_trace_pattern(std::string_view text);
std::string_view to_string(TracePattern p);

struct SyntheticSpec {
  TracePattern pattern = TracePattern::Sequential;
  std::uint64_t count = 0;
  double write_fraction = 0.0;
  std::uint64_t inter_arrival_ns = 10;
  std::uint64_t seed = 0;
  std::uint32_t size_bytes = 64;
};

/// Generates `spec.count` records with timestamps k * inter_arrival_ns.
///
/// Per record k, in order: one draw u = next_unit() decides the kind
/// (WRITE iff u < write_fraction); UNIFORM_RANDOM then takes one more draw
/// and uses slot = next() % (capacity / size_bytes), address = slot *
/// size_bytes. SAME_ROW walks the columns of rank 0 / bank 0 / row 0;
/// ROW_ALTERNATE uses column 0 of rows 0 and 1 of rank 0 / bank 0, starting
/// with row 0; SEQUENTIAL uses (k mod (capacity / size_bytes)) * size_bytes.
/// Throws InputError for an invalid spec.
std::vector<TraceRecord> generate(const SyntheticSpec& spec, const AddressMap& map);

}  // namespace memsim
