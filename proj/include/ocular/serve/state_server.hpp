#pragma once

#include "ocular/io/state_frame.hpp"
#include "ocular/sim/engine.hpp"

#include <filesystem>
#include <memory>
#include <string>

namespace ocular::serve {

struct ServeOptions {
  std::string address = "127.0.0.1";
  unsigned short port = 8080; // 0 picks a free port
  std::filesystem::path static_dir; // UI assets served at /; empty for none
  double frame_rate = 25.0;         // StateFrame broadcasts per second
};

/// Applies a parsed client command to the engine. Throws std::invalid_argument
/// if the resulting configuration is rejected.
void apply_command(sim::Engine& engine, const io::ClientCommand& command);

/// Runs the engine in real time on its own thread and streams StateFrames to
/// WebSocket clients at /ws. Client commands are queued and applied together
/// at the start of the next tick.
class StateServer {
 public:
  StateServer(sim::Engine engine, ServeOptions options);
  ~StateServer();

  StateServer(const StateServer&) = delete;
  StateServer& operator=(const StateServer&) = delete;

  /// Binds and starts the network and simulation threads.
  void start();
  void stop();

  /// Bound port; valid after start().
  unsigned short port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ocular::serve
