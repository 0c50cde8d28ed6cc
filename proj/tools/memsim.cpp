// memsim: trace-driven STT-MRAM / DRAM memory subsystem simulator.
//
//   memsim run --device <cfg> --trace <file> --out <path> [--format json|csv]
//   memsim compare --device-a <cfg> --device-b <cfg> --trace <file> --out <path>
//   memsim gen-trace --pattern <p> --count N --write-frac F --seed S --out <path>
//
// Exit codes: 0 success, 1 usage error, 2 input validation error,
// 3 internal assertion.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "memsim/report.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kInput = 2, kInternal = 3 };

void write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw memsim::InputError("cannot open output '" + path + "'");
  out << text;
  if (!out) throw memsim::InputError("failed writing '" + path + "'");
}

/// Geometry used by gen-trace when no device is given; matches the shipped
/// configs.
memsim::DeviceParams default_geometry() {
  memsim::DeviceParams dev;
  dev.name = "default";
  dev.ranks = 1;
  dev.banks_per_rank = 8;
  dev.rows_per_bank = 8192;
  dev.columns_per_row = 1024;
  dev.bytes_per_column = 2;
  return dev;
}

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("memsim");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("MEMSIM_LOG")) spdlog::set_level(spdlog::level::from_str(env));
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();

  CLI::App app{"Trace-driven STT-MRAM / DRAM memory simulator"};
  app.require_subcommand(1);

  std::string scheduler = "frfcfs";
  std::string addr_map = "rorabaco";

  // run
  auto* run_cmd = app.add_subcommand("run", "Simulate one device on a trace");
  std::string device_path, trace_path, out_path, format = "json";
  memsim::Tick snapshot_cycles = 0, min_cycles = 0;
  run_cmd->add_option("--device", device_path, "Device config file")->required();
  run_cmd->add_option("--trace", trace_path, "Trace file")->required();
  run_cmd->add_option("--scheduler", scheduler, "frfcfs | fcfs");
  run_cmd->add_option("--addr-map", addr_map, "rorabaco | robaraco");
  run_cmd->add_option("--snapshot-cycles", snapshot_cycles, "Energy snapshot interval (cycles)");
  run_cmd->add_option("--min-cycles", min_cycles, "Simulate at least this many cycles");
  run_cmd->add_option("--out", out_path, "Output path ('-' for stdout)")->required();
  run_cmd->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

  // compare
  auto* cmp_cmd = app.add_subcommand("compare", "Simulate two devices on the same trace");
  std::string device_a, device_b;
  cmp_cmd->add_option("--device-a", device_a, "First device config")->required();
  cmp_cmd->add_option("--device-b", device_b, "Second device config")->required();
  cmp_cmd->add_option("--trace", trace_path, "Trace file")->required();
  cmp_cmd->add_option("--scheduler", scheduler, "frfcfs | fcfs");
  cmp_cmd->add_option("--addr-map", addr_map, "rorabaco | robaraco");
  cmp_cmd->add_option("--out", out_path, "Output path ('-' for stdout)")->required();

  // gen-trace
  auto* gen_cmd = app.add_subcommand("gen-trace", "Write a synthetic trace");
  std::string pattern;
  memsim::SyntheticSpec spec;
  std::string gen_device;
  gen_cmd->add_option("--pattern", pattern, "same_row | row_alternate | sequential | uniform_random")
      ->required();
  gen_cmd->add_option("--count", spec.count, "Number of records")->required();
  gen_cmd->add_option("--write-frac", spec.write_fraction, "Fraction of writes in [0, 1]");
  gen_cmd->add_option("--seed", spec.seed, "PRNG seed");
  gen_cmd->add_option("--inter-arrival-ns", spec.inter_arrival_ns, "Spacing between records");
  gen_cmd->add_option("--size", spec.size_bytes, "Request size in bytes");
  gen_cmd->add_option("--device", gen_device, "Device config supplying the geometry");
  gen_cmd->add_option("--addr-map", addr_map, "rorabaco | robaraco");
  gen_cmd->add_option("--out", out_path, "Output path ('-' for stdout)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (run_cmd->parsed()) {
      memsim::RunConfig cfg;
      cfg.device = memsim::load_device_config_file(device_path);
      cfg.trace.path = trace_path;
      cfg.scheduler = memsim::parse_scheduler_policy(scheduler);
      cfg.address_map = memsim::parse_address_policy(addr_map);
      if (snapshot_cycles) cfg.snapshot_cycles = snapshot_cycles;
      cfg.min_sim_cycles = min_cycles;
      spdlog::info("run: device {} trace {}", cfg.device.name, trace_path);
      const auto report = memsim::run(cfg);
      write_output(out_path, format == "csv" ? memsim::emit_csv(report) : memsim::emit_json(report));
      spdlog::info("run: {} cycles simulated", report.total_sim_cycles);
    } else if (cmp_cmd->parsed()) {
      memsim::RunConfig a, b;
      a.device = memsim::load_device_config_file(device_a);
      b.device = memsim::load_device_config_file(device_b);
      a.trace.path = b.trace.path = trace_path;
      a.scheduler = b.scheduler = memsim::parse_scheduler_policy(scheduler);
      a.address_map = b.address_map = memsim::parse_address_policy(addr_map);
      spdlog::info("compare: {} vs {}", a.device.name, b.device.name);
      const auto report = memsim::compare(a, b);
      write_output(out_path, memsim::to_json(report).dump(2) + "\n");
    } else if (gen_cmd->parsed()) {
      spec.pattern = memsim::parse_trace_pattern(pattern);
      const memsim::DeviceParams dev =
          gen_device.empty() ? default_geometry() : memsim::load_device_config_file(gen_device);
      const memsim::AddressMap map(dev, memsim::parse_address_policy(addr_map));
      const auto records = memsim::generate(spec, map);
      write_output(out_path, memsim::serialize_trace(records));
      spdlog::info("gen-trace: {} records", records.size());
    }
  } catch (const memsim::InputError& e) {
    spdlog::error("{}", e.what());
    return kInput;
  } catch (const std::out_of_range& e) {
    spdlog::error("{}", e.what());
    return kInput;
  } catch (const memsim::InternalError& e) {
    spdlog::critical("internal error: {}", e.what());
    return kInternal;
  } catch (const std::exception& e) {
    spdlog::critical("internal error: {}", e.what());
    return kInternal;
  }
  return kOk;
}
