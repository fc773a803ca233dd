#include "ocular/serve/state_server.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <nlohmann/json.hpp>

#include <gtest/gtest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

namespace ocular::serve {
namespace {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

sim::Engine live_engine(double z = 2.0) {
  sim::Scenario s = sim::scenario_static(Vector3<double>(0, 0, z), std::numeric_limits<double>::infinity());
  s.noise_std = 0.0;
  return sim::Engine(s, sim::SimConfig{});
}

class Client {
 public:
  explicit Client(unsigned short port) : ws_(ioc_) {
    ws_.next_layer().connect(tcp::endpoint(asio::ip::make_address("127.0.0.1"), port));
    ws_.handshake("127.0.0.1", "/ws");
  }
  ~Client() {
    beast::error_code ec;
    ws_.close(websocket::close_code::normal, ec);
  }

  json read() {
    beast::flat_buffer buffer;
    ws_.read(buffer);
    return json::parse(beast::buffers_to_string(buffer.data()));
  }

  /// Next frame that is a state frame (not an error reply).
  json read_state() {
    for (;;) {
      json j = read();
      if (!j.contains("error")) return j;
    }
  }

  void send(const std::string& text) { ws_.write(asio::buffer(text)); }

 private:
  asio::io_context ioc_;
  websocket::stream<tcp::socket> ws_;
};

std::pair<unsigned, std::string> http_get(unsigned short port, const std::string& target) {
  asio::io_context ioc;
  beast::tcp_stream stream(ioc);
  stream.connect(tcp::endpoint(asio::ip::make_address("127.0.0.1"), port));
  http::request<http::empty_body> req(http::verb::get, target, 11);
  req.set(http::field::host, "127.0.0.1");
  http::write(stream, req);
  beast::flat_buffer buffer;
  http::response<http::string_body> res;
  http::read(stream, buffer, res);
  beast::error_code ec;
  stream.socket().shutdown(tcp::socket::shutdown_both, ec);
  return {res.result_int(), res.body()};
}

TEST(ApplyCommandTest, UpdatesEngine) {
  sim::Engine engine = live_engine();
  engine.step();
  apply_command(engine, io::SetTarget{Vector3<double>(0.1, 0.0, 0.5)});
  apply_command(engine, io::SetHead{5.0, std::nullopt});
  engine.step();
  EXPECT_EQ(engine.target(), Vector3<double>(0.1, 0.0, 0.5));
  EXPECT_NEAR(rad2deg(engine.head().yaw), 5.0, 1e-12);
  EXPECT_EQ(engine.head().pitch, 0.0);

  apply_command(engine, io::SetHead{std::nullopt, -2.0});
  engine.step();
  EXPECT_NEAR(rad2deg(engine.head().yaw), 5.0, 1e-12);
  EXPECT_NEAR(rad2deg(engine.head().pitch), -2.0, 1e-12);

  io::SetGains gains;
  gains.pursuit.kp = 1.5;
  gains.vor_gain = 0.5;
  gains.vor_enabled = false;
  apply_command(engine, gains);
  EXPECT_EQ(engine.config().control.pursuit.kp, 1.5);
  EXPECT_EQ(engine.config().control.vor_gain, 0.5);
  EXPECT_FALSE(engine.vor_enabled());

  apply_command(engine, io::Reset{});
  EXPECT_EQ(engine.ticks(), 0u);
  EXPECT_EQ(engine.config().control.pursuit.kp, 4.0);
  EXPECT_TRUE(engine.vor_enabled());
  engine.step();
  EXPECT_EQ(engine.target(), Vector3<double>(0, 0, 2.0));
  EXPECT_EQ(engine.head().yaw, 0.0);
}

TEST(StateServerTest, StreamsFramesAtLeastTwentyHertz) {
  StateServer server(live_engine(), {"127.0.0.1", 0, {}, 25.0});
  server.start();
  ASSERT_NE(server.port(), 0);
  Client client(server.port());

  json first = client.read_state();
  const auto start = Clock::now();
  int frames = 0;
  double last_t = first["t"];
  while (Clock::now() - start < std::chrono::seconds(2)) {
    const json j = client.read_state();
    ASSERT_GT(j["t"].get<double>(), last_t);
    last_t = j["t"];
    ++frames;
  }
  EXPECT_GE(frames / 2.0, 20.0);

  for (const char* eye : {"L", "R"})
    for (const char* key : {"u", "v", "valid", "ex", "ey", "pan_deg", "tilt_deg", "mode"})
      EXPECT_TRUE(first["eyes"][eye].contains(key)) << key;
  EXPECT_EQ(first["target"]["z"], 2.0);
  EXPECT_TRUE(first["head"].contains("yaw"));
}

TEST(StateServerTest, MalformedCommandGetsErrorAndStreamContinues) {
  StateServer server(live_engine(), {"127.0.0.1", 0, {}, 25.0});
  server.start();
  Client client(server.port());
  client.read_state();
  client.send("{not json");
  bool got_error = false;
  for (int k = 0; k < 100 && !got_error; ++k) got_error = client.read().contains("error");
  EXPECT_TRUE(got_error);
  client.send(R"({"cmd":"warp"})");
  got_error = false;
  for (int k = 0; k < 100 && !got_error; ++k) {
    const json j = client.read();
    if (j.contains("error")) {
      got_error = true;
      EXPECT_NE(j["error"].get<std::string>().find("warp"), std::string::npos);
    }
  }
  EXPECT_TRUE(got_error);
  for (int k = 0; k < 3; ++k) EXPECT_TRUE(client.read_state().contains("eyes"));
}

TEST(StateServerTest, ApproachingTargetVergesTheEyes) {
  StateServer server(live_engine(), {"127.0.0.1", 0, {}, 25.0});
  server.start();
  Client client(server.port());
  const json before = client.read_state();
  client.send(R"({"cmd":"set_target","x":0,"y":0,"z":0.3})");

  // Sign-opposite pans within a second of the command taking effect.
  json j;
  do j = client.read_state();
  while (j["target"]["z"] != 0.3);
  const double t_applied = j["t"];
  while (j["t"].get<double>() < t_applied + 1.0) j = client.read_state();
  EXPECT_LT(j["eyes"]["L"]["pan_deg"].get<double>(), -5.0);
  EXPECT_GT(j["eyes"]["R"]["pan_deg"].get<double>(), 5.0);
  EXPECT_GT(j["t"].get<double>(), before["t"].get<double>());
}

TEST(StateServerTest, CommandAppliesWhole) {
  StateServer server(live_engine(), {"127.0.0.1", 0, {}, 25.0});
  server.start();
  Client client(server.port());
  client.read_state();
  client.send(R"({"cmd":"set_head","yaw":10,"pitch":5})");
  for (int k = 0; k < 200; ++k) {
    const json j = client.read_state();
    const double yaw = j["head"]["yaw"], pitch = j["head"]["pitch"];
    if (yaw != 0.0 || pitch != 0.0) {
      EXPECT_NEAR(yaw, 10.0, 1e-9);
      EXPECT_NEAR(pitch, 5.0, 1e-9);
      return;
    }
  }
  FAIL() << "head command never reflected";
}

TEST(StateServerTest, EveryClientReceivesFrames) {
  StateServer server(live_engine(), {"127.0.0.1", 0, {}, 25.0});
  server.start();
  Client a(server.port());
  Client b(server.port());
  EXPECT_TRUE(a.read_state().contains("t"));
  EXPECT_TRUE(b.read_state().contains("t"));
}

TEST(StateServerTest, HttpPlaceholderAndStaticFiles) {
  {
    StateServer server(live_engine(), {"127.0.0.1", 0, {}, 25.0});
    server.start();
    auto [status, body] = http_get(server.port(), "/");
    EXPECT_EQ(status, 200u);
    EXPECT_NE(body.find("/ws"), std::string::npos);
    EXPECT_EQ(http_get(server.port(), "/app.js").first, 404u);
  }
  const auto dir = std::filesystem::temp_directory_path() / ("ocular_static_" + std::to_string(std::random_device{}()));
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "index.html") << "<h1>panel</h1>";
  std::ofstream(dir / "app.js") << "console.log(1)";
  {
    StateServer server(live_engine(), {"127.0.0.1", 0, dir, 25.0});
    server.start();
    EXPECT_EQ(http_get(server.port(), "/").second, "<h1>panel</h1>");
    EXPECT_EQ(http_get(server.port(), "/app.js?v=2").second, "console.log(1)");
    EXPECT_EQ(http_get(server.port(), "/../secret").first, 400u);
    EXPECT_EQ(http_get(server.port(), "/missing.css").first, 404u);
  }
  std::filesystem::remove_all(dir);
}

TEST(StateServerTest, StopIsIdempotent) {
  StateServer server(live_engine(), {"127.0.0.1", 0, {}, 25.0});
  server.start();
  server.stop();
  server.stop();
  EXPECT_THROW(StateServer(live_engine(), {"127.0.0.1", 0, {}, 0.0}), std::invalid_argument);
}

}  // namespace
}  // namespace ocular::serve
