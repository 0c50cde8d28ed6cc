#pragma once

#include <map>
#include <string>
#include <string_view>

#include "memsim/common.hpp"

namespace memsim {

// ---------------------------------------------------------------------------
// MTJ cell physics
// ---------------------------------------------------------------------------

namespace constants {
inline constexpr double kBoltzmann = 1.380649e-23;          // J/K
inline constexpr double kElectronCharge = 1.602176634e-19;  // C
inline constexpr double kPlanck = 6.62607015e-34;           // J*s
}  // namespace constants

/// Material and geometry parameters of a single magnetic tunnel junction.
struct MtjParams {
  double m_s = 0.0;          ///< saturation magnetization (A/m)
  double h_k = 0.0;          ///< effective anisotropy field (A/m)
  double alpha = 0.0;        ///< damping factor, (0, 1)
  double eta = 0.0;          ///< spin polarization, (0, 1]
  double t = 0.0;            ///< free-layer thickness (m)
  double d = 0.0;            ///< cell diameter (m)
  double f_0 = 0.0;          ///< attempt frequency (Hz)
  double temperature = 0.0;  ///< ambient temperature (K)
};

/// Throws std::domain_error naming the first field that breaks the MtjParams
/// invariants.
void validate(const MtjParams& p);

/// Thermal stability factor (Ms * Hk * t * d) / (2 kB T). Uses the t*d product
/// as the model states it, not a cell volume.
double thermal_stability(const MtjParams& p);

/// Zero-temperature critical switching current in amperes:
/// (8 alpha e Ms t) / (eta h pi d^2) * Hk.
double critical_current_zero(const MtjParams& p);

/// Critical switching current for a write pulse of `pulse_width_s` seconds:
/// Ic0 * (1 - ln(f0 * tp) / Delta).
double critical_current(const MtjParams& p, double pulse_width_s);

/// Tunnel magnetoresistance ratio (R_AP - R_P) / R_P.
double tmr(double r_ap, double r_p);

// ---------------------------------------------------------------------------
// Device description
// ---------------------------------------------------------------------------

enum class DeviceKind { Stt, Dram };

std::string_view to_string(DeviceKind kind);

/// Timing, current, voltage and geometry of one memory device. Timings are
/// held in clock cycles; config files specify them in nanoseconds.
struct DeviceParams {
  std::string name;
  DeviceKind kind = DeviceKind::Dram;
  double clock_mhz = 0.0;
  double tck_ns = 0.0;

  std::uint32_t burst_length = 8;
  std::uint32_t device_width_bits = 16;
  std::uint32_t ranks = 1;
  std::uint32_t banks_per_rank = 8;
  std::uint32_t bank_groups = 1;  // recorded only, no timing effect
  std::uint32_t rows_per_bank = 1;
  std::uint32_t columns_per_row = 1;
  std::uint32_t bytes_per_column = 1;

  std::map<std::string, Tick> timings;    // cycles
  std::map<std::string, double> currents;  // mA
  double vdd = 0.0;

  bool has_timing(const std::string& key) const { return timings.count(key) != 0; }
  /// Throws InputError if `key` is missing.
  Tick timing(const std::string& key) const;
  /// Returns `fallback` when `key` is absent.
  Tick timing_or(const std::string& key, Tick fallback) const;

  bool has_current(const std::string& key) const { return currents.count(key) != 0; }
  /// Current in amperes. Throws InputError if `key` is missing.
  double current_a(const std::string& key) const;

  /// Power-down standby current (IDD2P, defaults to IDD2N) in amperes.
  double powerdown_current_a() const;
  /// Self-refresh current (IDD6, defaults to the power-down current) in amperes.
  double self_refresh_current_a() const;

  /// Store time in cycles; 0 for DRAM.
  Tick store_cycles() const { return kind == DeviceKind::Stt ? timing("tST") : 0; }
  /// Busy time of an explicit or automatic REF.
  Tick refresh_cycles() const;
  /// Power-down / self-refresh exit latency (tXP, defaults to tRP).
  Tick exit_latency() const;

  std::uint32_t burst_bytes() const { return burst_length * device_width_bits / 8; }
  std::uint64_t rank_bytes() const {
    return std::uint64_t{banks_per_rank} * rows_per_bank * columns_per_row * bytes_per_column;
  }
  std::uint64_t capacity_bytes() const { return rank_bytes() * ranks; }

  double tck_seconds() const { return tck_ns * 1e-9; }

  bool operator==(const DeviceParams&) const = default;
};

/// Checks every DeviceParams invariant; throws InputError naming the first
/// violation.
void validate(const DeviceParams& dev);

/// ceil(ns / tck_ns), tolerant of floating-point noise on exact multiples.
Tick ns_to_cycles(double ns, double tck_ns);

/// Parses a `[section]` / `key = value` device config.
DeviceParams load_device_config(std::string_view text);
DeviceParams load_device_config_file(const std::string& path);

/// Writes a config that load_device_config reads back to an equal object.
std::string serialize_device_config(const DeviceParams& dev);

}  // namespace memsim
