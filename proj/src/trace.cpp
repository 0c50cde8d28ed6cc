#include "memsim/trace.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace memsim {

namespace {

template <typename T>
bool parse_uint(std::string_view s, T& out, int base = 10) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out, base);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

std::vector<TraceRecord> parse_trace(std::istream& in) {
  std::vector<TraceRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);

    std::istringstream fields(line);
    std::string ts, kind, addr, size, extra;
    if (!(fields >> ts)) continue;
    if (!(fields >> kind >> addr >> size))
      throw InputError("expected '<timestamp_ns> <R|W> <0xADDR> <size_bytes>'", line_no);
    if (fields >> extra) throw InputError("unexpected trailing field '" + extra + "'", line_no);

    TraceRecord rec;
    if (!parse_uint(ts, rec.timestamp_ns)) throw InputError("bad timestamp '" + ts + "'", line_no);
    if (kind == "R" || kind == "r") rec.kind = RequestKind::Read;
    else if (kind == "W" || kind == "w") rec.kind = RequestKind::Write;
    else throw InputError("request kind must be R or W, got '" + kind + "'", line_no);
    if (addr.size() < 3 || addr[0] != '0' || (addr[1] != 'x' && addr[1] != 'X') ||
        !parse_uint(std::string_view(addr).substr(2), rec.address, 16))
      throw InputError("bad hex address '" + addr + "'", line_no);
    if (!parse_uint(size, rec.size_bytes) || rec.size_bytes == 0)
      throw InputError("size must be a positive integer, got '" + size + "'", line_no);

    if (!records.empty() && rec.timestamp_ns < records.back().timestamp_ns)
      throw InputError("timestamp " + ts + " is lower than the previous record's", line_no);
    records.push_back(rec);
  }
  return records;
}

std::vector<TraceRecord> parse_trace(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_trace(in);
}

std::vector<TraceRecord> load_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open trace '" + path + "'");
  try {
    return parse_trace(in);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_trace(std::ostream& out, std::span<const TraceRecord> records) {
  for (const auto& r : records) {
    char addr[24];
    auto [end, ec] = std::to_chars(addr, addr + sizeof addr, r.address, 16);
    std::transform(addr, end, addr, [](unsigned char c) { return std::toupper(c); });
    out << r.timestamp_ns << ' ' << (r.kind == RequestKind::Read ? 'R' : 'W') << " 0x"
        << std::string_view(addr, static_cast<std::size_t>(end - addr)) << ' ' << r.size_bytes
        << '\n';
  }
}

std::string serialize_trace(std::span<const TraceRecord> records) {
  std::ostringstream out;
  write_trace(out, records);
  return out.str();
}

std::vector<MemoryRequest> to_requests(std::span<const TraceRecord> records,
                                       const DeviceParams& dev) {
  std::vector<MemoryRequest> reqs;
  reqs.reserve(records.size());
  for (const auto& r : records) {
    const double cycles = static_cast<double>(r.timestamp_ns) / dev.tck_ns;
    const auto tick = static_cast<Tick>(std::floor(cycles + 1e-9 * std::max(1.0, cycles)));
    reqs.push_back({tick, r.kind, r.address, r.size_bytes, std::nullopt, false});
  }
  return reqs;
}

TracePattern parse_trace_pattern(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
    return c == '-' ? '_' : static_cast<char>(std::tolower(c));
  });
  if (s == "same_row") return TracePattern::SameRow;
  if (s == "row_alternate") return TracePattern::RowAlternate;
  if (s == "sequential") return TracePattern::Sequential;
  if (s == "uniform_random" || s == "random") return TracePattern::UniformRandom;
  throw InputError("unknown trace pattern '" + std::string(text) + "'");
}

std::string_view to_string(TracePattern p) {
  switch (p) {
    case TracePattern::SameRow: return "same_row";
    case TracePattern::RowAlternate: return "row_alternate";
    case TracePattern::Sequential: return "sequential";
    case TracePattern::UniformRandom: return "uniform_random";
  }
  return "?";
}

std::vector<TraceRecord> generate(const SyntheticSpec& spec, const AddressMap& map) {
  if (spec.size_bytes == 0) throw InputError("synthetic trace: size_bytes must be >= 1");
  if (!(spec.write_fraction >= 0.0 && spec.write_fraction <= 1.0))
    throw InputError("synthetic trace: write fraction must be in [0, 1]");
  const std::uint64_t row_bytes = std::uint64_t{1} << (map.byte_bits() + map.column_bits());
  if (spec.size_bytes > row_bytes)
    throw InputError("synthetic trace: size_bytes exceeds one row (" + std::to_string(row_bytes) +
                     " bytes)");
  if (spec.pattern == TracePattern::RowAlternate && map.row_bits() == 0)
    throw InputError("synthetic trace: row_alternate needs at least two rows");

  const std::uint64_t capacity = map.capacity();
  const std::uint64_t slots = capacity / spec.size_bytes;
  const std::uint64_t row_slots = row_bytes / spec.size_bytes;
  const std::uint64_t row0 = map.encode({0, 0, 0, 0});
  const std::uint64_t row1 = spec.pattern == TracePattern::RowAlternate ? map.encode({0, 0, 1, 0}) : 0;

  SplitMix64 rng(spec.seed);
  std::vector<TraceRecord> out;
  out.reserve(spec.count);
  for (std::uint64_t k = 0; k < spec.count; ++k) {
    TraceRecord rec;
    rec.timestamp_ns = k * spec.inter_arrival_ns;
    rec.size_bytes = spec.size_bytes;
    rec.kind = rng.next_unit() < spec.write_fraction ? RequestKind::Write : RequestKind::Read;
    switch (spec.pattern) {
      case TracePattern::SameRow: rec.address = row0 + (k % row_slots) * spec.size_bytes; break;
      case TracePattern::RowAlternate: rec.address = k % 2 == 0 ? row0 : row1; break;
      case TracePattern::Sequential: rec.address = (k % slots) * spec.size_bytes; break;
      case TracePattern::UniformRandom: rec.address = (rng.next() % slots) * spec.size_bytes; break;
    }
    out.push_back(rec);
  }
  return out;
}

}  // namespace memsim
