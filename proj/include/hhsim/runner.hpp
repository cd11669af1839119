#pragma once

#include <string>
#include <vector>

#include "hhsim/config.hpp"
#include "hhsim/csv.hpp"
#include "hhsim/experiments.hpp"
#include "hhsim/protocols.hpp"

namespace hhsim {

inline constexpr const char* kVersion = "hhsim " HHSIM_VERSION;

struct RunContext {
  std::string out_dir = ".";
  int threads = 1;
};

struct NamedTable {
  std::string file_name;
  CsvTable table;
};

// Protocol parameters in rad/us from the [protocol] section.
ProtocolParams protocol_from_config(const RunConfig& cfg);
// g in rad/us from the [system] section.
double coupling_from_config(const RunConfig& cfg, const ProtocolParams& p);
RunSettings settings_from_config(const RunConfig& cfg, int threads, CsvTable* metadata_sink = nullptr);

/// Runs the configured experiment and returns the tables without writing them.
std::vector<NamedTable> execute(const RunConfig& cfg, int threads);

/// execute() and write every table into ctx.out_dir. Returns the written paths.
std::vector<std::string> run(const RunConfig& cfg, const RunContext& ctx);

}  // namespace hhsim
