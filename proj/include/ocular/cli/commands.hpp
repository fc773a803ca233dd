#pragma once

#include "ocular/io/config_file.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ocular::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2, // bad arguments, bad config, undecodable frame
  kOutput = 3, // output not writable
};

struct RunOptions {
  std::string experiment;
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out_dir = ".";
  bool vor_disabled = false;
  bool plot = false;
};

struct EncodeOptions {
  int id = 1;
  std::string instr = "ping"; // ping | read | write
  std::optional<int> addr;
  std::string data_hex;
  std::optional<int> len;
};

struct ServeCliOptions {
  std::optional<std::filesystem::path> config;
  std::string address = "127.0.0.1";
  unsigned short port = 8080;
  std::filesystem::path static_dir;
};

/// --config, then $OCULAR_CONFIG, then built-in defaults. Throws io::ConfigError.
io::AppConfig resolve_config(const std::optional<std::filesystem::path>& path);

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err);
int cmd_codec_encode(const EncodeOptions& opts, std::ostream& out, std::ostream& err);
int cmd_codec_decode(const std::string& hex, std::ostream& out, std::ostream& err);
/// Blocks until SIGINT or SIGTERM.
int cmd_serve(const ServeCliOptions& opts, std::ostream& out, std::ostream& err);

/// Parses argv-style arguments (without the program name) and dispatches.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ocular::cli
