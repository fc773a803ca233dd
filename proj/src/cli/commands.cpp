#include "ocular/cli/commands.hpp"

#include "ocular/io/svg_plot.hpp"
#include "ocular/io/trace_csv.hpp"
#include "ocular/protocol/control_table.hpp"
#include "ocular/protocol/packet.hpp"
#include "ocular/serve/state_server.hpp"
#include "ocular/sim/engine.hpp"
#include "ocular/sim/metrics.hpp"

#include <CLI11.hpp>
#include <boost/asio/io_context.hpp>
#include <boost/asio/signal_set.hpp>

#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

namespace ocular::cli {
namespace {

namespace fs = std::filesystem;

bool write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) return false;
  f << content;
  f.flush();
  return static_cast<bool>(f);
}

}  // namespace

io::AppConfig resolve_config(const std::optional<fs::path>& path) {
  if (path) return io::load_config(*path);
  if (const char* env = std::getenv("OCULAR_CONFIG"); env != nullptr && *env != '\0') return io::load_config(env);
  return io::AppConfig{};
}

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  if (!io::is_experiment(opts.experiment)) {
    err << "error: unknown experiment '" << opts.experiment << "' (expected saccade, pursuit, vergence or vor)\n";
    return kUsage;
  }
  io::AppConfig cfg;
  sim::Scenario scenario;
  try {
    cfg = resolve_config(opts.config);
    scenario = io::build_scenario(cfg, opts.experiment, opts.seed.value_or(cfg.seed), opts.vor_disabled);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  std::error_code ec;
  fs::create_directories(opts.out_dir, ec);
  if (ec || !fs::is_directory(opts.out_dir)) {
    err << "error: cannot create output directory " << opts.out_dir << "\n";
    return kOutput;
  }

  const sim::Trace trace = sim::run(scenario, cfg.sim);
  const sim::Metrics metrics = sim::compute_metrics(trace, cfg.settle_band, cfg.sim.camera.width);
  const io::RunInfo info{opts.experiment, scenario.seed, opts.vor_disabled, cfg.settle_band};

  std::ostringstream csv;
  io::write_trace_csv(csv, trace);
  const fs::path csv_path = opts.out_dir / (opts.experiment + "_trace.csv");
  const fs::path metrics_path = opts.out_dir / (opts.experiment + "_metrics.json");
  if (!write_file(csv_path, csv.str()) ||
      !write_file(metrics_path, io::metrics_json(metrics, info, trace.size()).dump(2) + "\n")) {
    err << "error: cannot write to " << opts.out_dir << "\n";
    return kOutput;
  }
  out << "wrote " << csv_path.string() << "\n" << "wrote " << metrics_path.string() << "\n";

  if (opts.plot) {
    const fs::path svg_path = opts.out_dir / (opts.experiment + "_plot.svg");
    const std::string title = opts.experiment + (opts.vor_disabled ? " (VOR disabled)" : "") + ": face centre in each camera";
    if (!write_file(svg_path, io::render_trace_svg(trace, cfg.sim.camera, title))) {
      err << "error: cannot write " << svg_path << "\n";
      return kOutput;
    }
    out << "wrote " << svg_path.string() << "\n";
  }

  out << "settling_time: " << (metrics.settling_time ? io::format_number(*metrics.settling_time) : "not settled")
      << "\nsteady_state_error: " << io::format_number(metrics.steady_state_error)
      << "\nrms_retinal_slip: " << io::format_number(metrics.rms_retinal_slip)
      << "\npeak_error: " << io::format_number(metrics.peak_error) << "\n";
  return kOk;
}

int cmd_codec_encode(const EncodeOptions& opts, std::ostream& out, std::ostream& err) {
  using namespace protocol;
  try {
    if (opts.id < 0 || opts.id > 255) throw std::invalid_argument("--id must be 0..255");
    InstructionPacket packet;
    packet.id = static_cast<std::uint8_t>(opts.id);
    const auto addr_bytes = [&] {
      if (!opts.addr) throw std::invalid_argument("--addr is required for " + opts.instr);
      if (*opts.addr < 0 || *opts.addr > 0xFFFF) throw std::invalid_argument("--addr must be 0..65535");
      return Bytes{static_cast<std::uint8_t>(*opts.addr & 0xFF), static_cast<std::uint8_t>(*opts.addr >> 8)};
    };

    if (opts.instr == "ping") {
      packet.instruction = static_cast<std::uint8_t>(Instruction::Ping);
      if (opts.addr || !opts.data_hex.empty() || opts.len) throw std::invalid_argument("ping takes no --addr/--data/--len");
    } else if (opts.instr == "write") {
      packet.instruction = static_cast<std::uint8_t>(Instruction::Write);
      packet.params = addr_bytes();
      const Bytes data = from_hex(opts.data_hex);
      if (data.empty()) throw std::invalid_argument("write needs --data");
      packet.params.insert(packet.params.end(), data.begin(), data.end());
    } else if (opts.instr == "read") {
      packet.instruction = static_cast<std::uint8_t>(Instruction::Read);
      packet.params = addr_bytes();
      int len = 0;
      if (opts.len) {
        len = *opts.len;
      } else if (const Register* reg = xl320::find_register(static_cast<std::uint16_t>(*opts.addr))) {
        len = reg->size;
      } else {
        throw std::invalid_argument("--len is required for an address outside the known control table");
      }
      if (len < 1 || len > 0xFFFF) throw std::invalid_argument("--len must be 1..65535");
      packet.params.push_back(static_cast<std::uint8_t>(len & 0xFF));
      packet.params.push_back(static_cast<std::uint8_t>(len >> 8));
    } else {
      throw std::invalid_argument("--instr must be ping, read or write");
    }
    out << to_hex(encode_packet(packet), true) << "\n";
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

int cmd_codec_decode(const std::string& hex, std::ostream& out, std::ostream& err) {
  using namespace protocol;
  Bytes bytes;
  try {
    bytes = from_hex(hex);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  const DecodeResult result = decode_packet(bytes);
  if (const auto* e = std::get_if<DecodeError>(&result)) {
    err << "decode error: " << decode_error_name(e->kind) << ": " << e->detail << "\n";
    return kUsage;
  }
  out << std::visit(
      [](const auto& p) -> std::string {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, DecodeError>)
          return {};
        else
          return describe(Packet{p});
      },
      result);
  return kOk;
}

int cmd_serve(const ServeCliOptions& opts, std::ostream& out, std::ostream& err) {
  io::AppConfig cfg;
  try {
    cfg = resolve_config(opts.config);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  sim::Scenario scenario =
      sim::scenario_static(Vector3<double>(0.0, 0.0, 2.0), std::numeric_limits<double>::infinity());
  scenario.name = "live";
  scenario.noise_std = cfg.noise_px;
  scenario.seed = cfg.seed;

  serve::ServeOptions sopts;
  sopts.address = opts.address;
  sopts.port = opts.port;
  sopts.static_dir = opts.static_dir;
  try {
    serve::StateServer server(sim::Engine(scenario, cfg.sim), sopts);
    server.start();
    out << "serving on http://" << opts.address << ":" << server.port() << "/ (websocket at /ws); Ctrl-C to stop"
        << std::endl;
    boost::asio::io_context signals_ctx;
    boost::asio::signal_set signals(signals_ctx, SIGINT, SIGTERM);
    signals.async_wait([](const boost::system::error_code&, int) {});
    signals_ctx.run();
    server.stop();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Binocular robotic eye: simulator, servo protocol tools and live state server", "ocular"};
  app.require_subcommand(1);

  RunOptions run;
  std::uint64_t seed = 0;
  std::string config, out_dir = ".";
  auto* run_cmd = app.add_subcommand("run", "Run one experiment and write its trace and metrics");
  run_cmd->add_option("experiment", run.experiment, "saccade | pursuit | vergence | vor")->required();
  auto* config_opt = run_cmd->add_option("--config", config, "TOML config (default: $OCULAR_CONFIG or built-in)");
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Noise seed (default: [sim] seed)");
  run_cmd->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run_cmd->add_flag("--vor-disabled", run.vor_disabled, "Baseline run with the vestibulo-ocular term off");
  run_cmd->add_flag("--plot", run.plot, "Also write <experiment>_plot.svg");

  auto* codec = app.add_subcommand("codec", "Dynamixel 2.0 frame encoder/decoder");
  codec->require_subcommand(1);
  EncodeOptions enc;
  int addr = 0, len = 0;
  auto* encode = codec->add_subcommand("encode", "Print an instruction frame as hex");
  encode->add_option("--id", enc.id, "Servo id (254 = broadcast)")->required();
  encode->add_option("--instr", enc.instr, "ping | read | write")->required();
  auto* addr_opt = encode->add_option("--addr", addr, "Control table address");
  encode->add_option("--data", enc.data_hex, "Write payload as hex, little-endian");
  auto* len_opt = encode->add_option("--len", len, "Read length (default: register size)");
  std::vector<std::string> hex_parts;
  auto* decode = codec->add_subcommand("decode", "Dump a frame given as hex");
  decode->add_option("hex", hex_parts, "Frame bytes; whitespace is ignored")->required();

  ServeCliOptions serve_opts;
  std::string serve_config, static_dir;
  auto* serve_cmd = app.add_subcommand("serve", "Run the simulator live and stream state over WebSocket");
  auto* serve_config_opt = serve_cmd->add_option("--config", serve_config, "TOML config");
  serve_cmd->add_option("--port", serve_opts.port, "TCP port (0 = any free port)")->capture_default_str();
  serve_cmd->add_option("--address", serve_opts.address, "Listen address")->capture_default_str();
  serve_cmd->add_option("--static", static_dir, "Directory with the built UI");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  if (*run_cmd) {
    if (*config_opt) run.config = config;
    if (*seed_opt) run.seed = seed;
    run.out_dir = out_dir;
    return cmd_run(run, out, err);
  }
  if (*codec) {
    if (*encode) {
      if (*addr_opt) enc.addr = addr;
      if (*len_opt) enc.len = len;
      return cmd_codec_encode(enc, out, err);
    }
    std::string hex;
    for (const auto& part : hex_parts) hex += part;
    return cmd_codec_decode(hex, out, err);
  }
  if (*serve_config_opt) serve_opts.config = serve_config;
  serve_opts.static_dir = static_dir;
  return cmd_serve(serve_opts, out, err);
}

}  // namespace ocular::cli
