#include "memsim/device.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

namespace memsim {

// ---------------------------------------------------------------------------
// MTJ physics
// ---------------------------------------------------------------------------

void validate(const MtjParams& p) {
  auto require_positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw std::domain_error(std::string("MtjParams.") + name + " must be > 0");
  };
  require_positive(p.m_s, "m_s");
  require_positive(p.h_k, "h_k");
  require_positive(p.alpha, "alpha");
  require_positive(p.eta, "eta");
  require_positive(p.t, "t");
  require_positive(p.d, "d");
  require_positive(p.f_0, "f_0");
  require_positive(p.temperature, "temperature");
  if (p.eta > 1.0) throw std::domain_error("MtjParams.eta must be <= 1");
  if (p.alpha >= 1.0) throw std::domain_error("MtjParams.alpha must be < 1");
}

double thermal_stability(const MtjParams& p) {
  if (p.temperature == 0.0) throw std::domain_error("thermal_stability: temperature is zero");
  return (p.m_s * p.h_k * p.t * p.d) / (2.0 * constants::kBoltzmann * p.temperature);
}

double critical_current_zero(const MtjParams& p) {
  if (p.eta == 0.0) throw std::domain_error("critical_current_zero: eta is zero");
  if (p.d == 0.0) throw std::domain_error("critical_current_zero: d is zero");
  return (8.0 * p.alpha * constants::kElectronCharge * p.m_s * p.t) /
         (p.eta * constants::kPlanck * std::numbers::pi * p.d * p.d) * p.h_k;
}

double critical_current(const MtjParams& p, double pulse_width_s) {
  const double x = p.f_0 * pulse_width_s;
  if (!(x > 0.0)) throw std::domain_error("critical_current: f_0 * pulse width must be > 0");
  const double delta = thermal_stability(p);
  if (!(delta > 0.0)) throw std::domain_error("critical_current: thermal stability must be > 0");
  return critical_current_zero(p) * (1.0 - std::log(x) / delta);
}

double tmr(double r_ap, double r_p) {
  if (!(r_p > 0.0)) throw std::domain_error("tmr: R_P must be > 0");
  if (r_ap < r_p) throw std::domain_error("tmr: R_AP must be >= R_P");
  return (r_ap - r_p) / r_p;
}

// ---------------------------------------------------------------------------
// DeviceParams
// ---------------------------------------------------------------------------

std::string_view to_string(DeviceKind kind) {
  return kind == DeviceKind::Stt ? "stt" : "dram";
}

Tick DeviceParams::timing(const std::string& key) const {
  auto it = timings.find(key);
  if (it == timings.end()) throw InputError("device '" + name + "' has no timing " + key);
  return it->second;
}

Tick DeviceParams::timing_or(const std::string& key, Tick fallback) const {
  auto it = timings.find(key);
  return it == timings.end() ? fallback : it->second;
}

double DeviceParams::current_a(const std::string& key) const {
  auto it = currents.find(key);
  if (it == currents.end()) throw InputError("device '" + name + "' has no current " + key);
  return it->second * 1e-3;
}

double DeviceParams::powerdown_current_a() const {
  return has_current("IDD2P") ? current_a("IDD2P") : current_a("IDD2N");
}

double DeviceParams::self_refresh_current_a() const {
  return has_current("IDD6") ? current_a("IDD6") : powerdown_current_a();
}

Tick DeviceParams::refresh_cycles() const {
  if (kind == DeviceKind::Dram) return timing("tRFC");
  return timing_or("tRFC", timing("tST"));
}

Tick DeviceParams::exit_latency() const { return timing_or("tXP", timing("tRP")); }

namespace {

const char* const kCommonTimings[] = {"tRCD", "tCL", "tCWL", "tRAS", "tRP", "tBURST", "tWR"};
const char* const kCommonCurrents[] = {"IDD0", "IDD2N", "IDD3N", "IDD4R", "IDD4W"};

}  // namespace

void validate(const DeviceParams& dev) {
  auto fail = [&](const std::string& why) {
    throw InputError("device '" + dev.name + "': " + why);
  };
  if (dev.name.empty()) throw InputError("device config: [meta] name is required");
  if (!(dev.clock_mhz > 0.0) || !(dev.tck_ns > 0.0)) fail("clock must be positive");
  if (std::abs(dev.tck_ns * dev.clock_mhz * 1e-3 - 1.0) > 1e-9)
    fail("tck_ns * clock_mhz * 1e-3 must equal 1");

  for (auto [v, what] : {std::pair{dev.burst_length, "burst_length"},
                         {dev.device_width_bits, "device_width_bits"},
                         {dev.ranks, "ranks"},
                         {dev.banks_per_rank, "banks_per_rank"},
                         {dev.bank_groups, "bank_groups"},
                         {dev.rows_per_bank, "rows_per_bank"},
                         {dev.columns_per_row, "columns_per_row"},
                         {dev.bytes_per_column, "bytes_per_column"}}) {
    if (v < 1) fail(std::string(what) + " must be >= 1");
  }
  if (dev.banks_per_rank > 64) fail("banks_per_rank must be <= 64");
  if ((dev.burst_length * dev.device_width_bits) % 8 != 0)
    fail("burst_length * device_width_bits must be a whole number of bytes");

  for (const char* key : kCommonTimings)
    if (!dev.has_timing(key)) fail(std::string("missing timing ") + key);
  for (const char* key : kCommonCurrents)
    if (!dev.has_current(key)) fail(std::string("missing current ") + key);

  if (dev.kind == DeviceKind::Stt) {
    if (!dev.has_timing("tST")) fail("STT device requires tST");
    if (dev.timing_or("tREFI", 0) != 0) fail("STT device must not set tREFI (no automatic refresh)");
  } else {
    if (!dev.has_timing("tREFI") || dev.timing("tREFI") == 0) fail("DRAM device requires tREFI");
    if (!dev.has_timing("tRFC")) fail("DRAM device requires tRFC");
    if (!dev.has_current("IDD5")) fail("DRAM device requires IDD5");
  }

  for (const auto& [key, ma] : dev.currents)
    if (!(ma >= 0.0)) fail("current " + key + " must be >= 0");
  const double idd0 = dev.currents.at("IDD0");
  const double idd3n = dev.currents.at("IDD3N");
  const double idd2n = dev.currents.at("IDD2N");
  if (!(idd0 >= idd3n && idd3n >= idd2n)) fail("requires IDD0 >= IDD3N >= IDD2N");
  for (const char* key : {"IDD4R", "IDD4W", "IDD5"})
    if (dev.has_current(key) && dev.currents.at(key) < idd3n)
      fail(std::string("requires ") + key + " >= IDD3N");
  if (!(dev.vdd > 0.0)) fail("vdd must be > 0");
}

Tick ns_to_cycles(double ns, double tck_ns) {
  if (!(ns >= 0.0)) throw InputError("timing must be >= 0 ns");
  const double cycles = ns / tck_ns;
  return static_cast<Tick>(std::ceil(cycles - 1e-9 * std::max(1.0, cycles)));
}

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view text, std::size_t line) {
  std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InputError("expected a number, got '" + s + "'", line);
  }
  if (used != s.size()) throw InputError("expected a number, got '" + s + "'", line);
  return v;
}

std::uint32_t parse_count(std::string_view text, std::size_t line) {
  const double v = parse_double(text, line);
  if (v < 0 || v != std::floor(v) || v > 4294967295.0)
    throw InputError("expected a non-negative integer, got '" + std::string(text) + "'", line);
  return static_cast<std::uint32_t>(v);
}

}  // namespace

DeviceParams load_device_config(std::string_view text) {
  DeviceParams dev;
  std::optional<double> clock_mhz;
  std::optional<double> tck_ns;
  std::map<std::string, double> timings_ns;
  std::set<std::string> seen;
  bool have_vdd = false;

  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw InputError("unterminated section header", line_no);
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "meta" && section != "geometry" && section != "timing_ns" &&
          section != "current_ma" && section != "voltage")
        throw InputError("unknown section [" + section + "]", line_no);
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw InputError("expected 'key = value'", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw InputError("expected 'key = value'", line_no);
    if (section.empty()) throw InputError("key '" + key + "' outside of any section", line_no);
    if (!seen.insert(section + "." + key).second)
      throw InputError("duplicate key '" + key + "' in [" + section + "]", line_no);

    if (section == "meta") {
      if (key == "name") {
        dev.name = std::string(value);
      } else if (key == "kind") {
        if (value == "stt" || value == "STT") dev.kind = DeviceKind::Stt;
        else if (value == "dram" || value == "DRAM") dev.kind = DeviceKind::Dram;
        else throw InputError("kind must be stt or dram", line_no);
      } else if (key == "clock_mhz") {
        clock_mhz = parse_double(value, line_no);
      } else if (key == "tck_ns") {
        tck_ns = parse_double(value, line_no);
      } else {
        throw InputError("unknown [meta] key '" + key + "'", line_no);
      }
    } else if (section == "geometry") {
      const std::uint32_t v = parse_count(value, line_no);
      if (key == "ranks") dev.ranks = v;
      else if (key == "banks_per_rank") dev.banks_per_rank = v;
      else if (key == "bank_groups") dev.bank_groups = v;
      else if (key == "rows_per_bank") dev.rows_per_bank = v;
      else if (key == "columns_per_row") dev.columns_per_row = v;
      else if (key == "bytes_per_column") dev.bytes_per_column = v;
      else if (key == "burst_length") dev.burst_length = v;
      else if (key == "device_width_bits") dev.device_width_bits = v;
      else throw InputError("unknown [geometry] key '" + key + "'", line_no);
    } else if (section == "timing_ns") {
      const double ns = parse_double(value, line_no);
      if (ns < 0) throw InputError("timing " + key + " must be >= 0", line_no);
      timings_ns[key] = ns;
    } else if (section == "current_ma") {
      dev.currents[key] = parse_double(value, line_no);
    } else {  // voltage
      if (key != "vdd") throw InputError("unknown [voltage] key '" + key + "'", line_no);
      dev.vdd = parse_double(value, line_no);
      have_vdd = true;
    }
  }

  if (!clock_mhz && !tck_ns) throw InputError("device config: [meta] needs clock_mhz or tck_ns");
  if (!have_vdd) throw InputError("device config: [voltage] vdd is required");
  dev.clock_mhz = clock_mhz ? *clock_mhz : 1000.0 / *tck_ns;
  dev.tck_ns = tck_ns ? *tck_ns : 1000.0 / *clock_mhz;
  if (!(dev.tck_ns > 0.0)) throw InputError("device config: clock must be positive");

  for (const auto& [key, ns] : timings_ns) dev.timings[key] = ns_to_cycles(ns, dev.tck_ns);

  validate(dev);
  return dev;
}

DeviceParams load_device_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open device config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return load_device_config(buf.str());
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string serialize_device_config(const DeviceParams& dev) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "[meta]\n"
      << "name = " << dev.name << "\n"
      << "kind = " << to_string(dev.kind) << "\n"
      << "clock_mhz = " << dev.clock_mhz << "\n"
      << "tck_ns = " << dev.tck_ns << "\n\n";
  out << "[geometry]\n"
      << "ranks = " << dev.ranks << "\n"
      << "banks_per_rank = " << dev.banks_per_rank << "\n"
      << "bank_groups = " << dev.bank_groups << "\n"
      << "rows_per_bank = " << dev.rows_per_bank << "\n"
      << "columns_per_row = " << dev.columns_per_row << "\n"
      << "bytes_per_column = " << dev.bytes_per_column << "\n"
      << "burst_length = " << dev.burst_length << "\n"
      << "device_width_bits = " << dev.device_width_bits << "\n\n";
  out << "[timing_ns]\n";
  for (const auto& [key, cycles] : dev.timings)
    out << key << " = " << static_cast<double>(cycles) * dev.tck_ns << "\n";
  out << "\n[current_ma]\n";
  for (const auto& [key, ma] : dev.currents) out << key << " = " << ma << "\n";
  out << "\n[voltage]\nvdd = " << dev.vdd << "\n";
  return out.str();
}

}  // namespace memsim
