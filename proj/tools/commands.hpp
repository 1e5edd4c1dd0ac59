#pragma once

#include <functional>
#include <ostream>

#include <json.hpp>

#include "config.hpp"
#include "table.hpp"

namespace cvreal::cli {

struct CommandResult {
  Table table;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  bool single_row = false;  // JSON results as one object instead of an array
  bool failed = false;      // any check failed; exit code 1 for `check`
};

CommandResult cmd_fig1(const RunConfig& cfg);
CommandResult cmd_fig2(const RunConfig& cfg);
CommandResult cmd_irreality(const RunConfig& cfg);
CommandResult cmd_ck(const RunConfig& cfg);
CommandResult cmd_pointer(const RunConfig& cfg);
CommandResult cmd_check(const RunConfig& cfg);
CommandResult cmd_sweep(const RunConfig& cfg);

// Runs fn(i) for i in [0, n) on `workers` threads. Exceptions are rethrown
// after all threads join, lowest index first.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

// Full CLI entry: parse, dispatch, write. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cvreal::cli
