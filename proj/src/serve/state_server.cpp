#include "ocular/serve/state_server.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <deque>
#include <mutex>
#include <set>
#include <thread>

namespace ocular::serve {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

void apply_command(sim::Engine& engine, const io::ClientCommand& command) {
  std::visit(
      [&engine](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, io::SetTarget>) {
          engine.set_target(c.position);
        } else if constexpr (std::is_same_v<T, io::SetHead>) {
          HeadPose<double> head = engine.head();
          if (c.yaw) head.yaw = deg2rad(*c.yaw);
          if (c.pitch) head.pitch = deg2rad(*c.pitch);
          engine.set_head(head);
        } else if constexpr (std::is_same_v<T, io::SetGains>) {
          engine.set_control(c.applied_to(engine.config().control));
          if (c.vor_enabled) engine.set_vor_enabled(*c.vor_enabled);
        } else {
          engine.reset();
        }
      },
      command);
}

namespace {

constexpr std::size_t kMaxQueuedFrames = 32;

const char* mime_type(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".html" || ext == ".htm") return "text/html";
  if (ext == ".js" || ext == ".mjs") return "application/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  if (ext == ".ico") return "image/x-icon";
  if (ext == ".map") return "application/json";
  return "application/octet-stream";
}

constexpr const char* kPlaceholderPage =
    "<!doctype html><title>ocular</title><p>The UI is not built. State frames stream from "
    "<code>ws://HOST:PORT/ws</code>.</p>";

class WsSession;

// Owned by the network thread.
class Hub {
 public:
  virtual ~Hub() = default;
  virtual void join(const std::shared_ptr<WsSession>& s) = 0;
  virtual void leave(WsSession* s) = 0;
  virtual void on_message(const std::shared_ptr<WsSession>& s, const std::string& text) = 0;
};

class WsSession : public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket&& socket, Hub& hub) : ws_(std::move(socket)), hub_(hub) {}

  void run(http::request<http::string_body> req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, [self = shared_from_this()](beast::error_code ec) {
      if (ec) return;
      self->hub_.join(self);
      self->do_read();
    });
  }

  void send(std::shared_ptr<const std::string> message) {
    if (closed_) return;
    // Slow reader: drop the oldest frames that are not being written.
    if (queue_.size() >= kMaxQueuedFrames) queue_.erase(queue_.begin() + 1);
    queue_.push_back(std::move(message));
    if (queue_.size() == 1) do_write();
  }

  void close() {
    if (closed_) return;
    closed_ = true;
    ws_.async_close(websocket::close_code::going_away, [self = shared_from_this()](beast::error_code) {});
  }

 private:
  void do_read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->closed_ = true;
        self->hub_.leave(self.get());
        return;
      }
      const std::string text = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      self->hub_.on_message(self, text);
      self->do_read();
    });
  }

  void do_write() {
    ws_.text(true);
    ws_.async_write(asio::buffer(*queue_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->closed_ = true;
        self->queue_.clear();
        self->hub_.leave(self.get());
        return;
      }
      self->queue_.pop_front();
      if (!self->queue_.empty()) self->do_write();
    });
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  std::deque<std::shared_ptr<const std::string>> queue_;
  Hub& hub_;
  bool closed_ = false;
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket&& socket, Hub& hub, std::filesystem::path static_dir)
      : stream_(std::move(socket)), hub_(hub), static_dir_(std::move(static_dir)) {}

  void run() { do_read(); }

 private:
  void do_read() {
    req_ = {};
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, req_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return;
      self->on_request();
    });
  }

  void on_request() {
    if (websocket::is_upgrade(req_)) {
      if (req_.target() == "/ws") {
        stream_.expires_never();
        std::make_shared<WsSession>(stream_.release_socket(), hub_)->run(std::move(req_));
        return;
      }
      return reply(http::status::not_found, "text/plain", "websocket endpoint is /ws\n");
    }
    if (req_.method() != http::verb::get && req_.method() != http::verb::head)
      return reply(http::status::method_not_allowed, "text/plain", "GET only\n");

    std::string target(req_.target());
    target = target.substr(0, target.find('?'));
    if (target.empty() || target[0] != '/' || target.find("..") != std::string::npos)
      return reply(http::status::bad_request, "text/plain", "bad path\n");
    if (target.back() == '/') target += "index.html";

    if (static_dir_.empty() || !std::filesystem::is_directory(static_dir_)) {
      if (target == "/index.html") return reply(http::status::ok, "text/html", kPlaceholderPage);
      return reply(http::status::not_found, "text/plain", "not found\n");
    }

    const std::filesystem::path path = static_dir_ / target.substr(1);
    http::file_body::value_type body;
    beast::error_code ec;
    body.open(path.string().c_str(), beast::file_mode::scan, ec);
    if (ec) return reply(http::status::not_found, "text/plain", "not found\n");

    auto res = std::make_shared<http::response<http::file_body>>(http::status::ok, req_.version());
    res->set(http::field::content_type, mime_type(path));
    res->keep_alive(req_.keep_alive());
    if (req_.method() == http::verb::head) {
      res->content_length(body.size());
    } else {
      res->body() = std::move(body);
      res->prepare_payload();
    }
    write(res);
  }

  void reply(http::status status, const char* type, std::string text) {
    auto res = std::make_shared<http::response<http::string_body>>(status, req_.version());
    res->set(http::field::content_type, type);
    res->keep_alive(req_.keep_alive());
    res->body() = std::move(text);
    res->prepare_payload();
    write(res);
  }

  template <typename Response>
  void write(std::shared_ptr<Response> res) {
    http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code ec, std::size_t) {
      if (ec) return;
      if (res->need_eof()) {
        beast::error_code ignored;
        self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
        return;
      }
      self->do_read();
    });
  }

  beast::tcp_stream stream_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
  Hub& hub_;
  std::filesystem::path static_dir_;
};

struct Pending {
  io::ClientCommand command;
  std::weak_ptr<WsSession> from;
};

}  // namespace

struct StateServer::Impl : Hub {
  Impl(sim::Engine e, ServeOptions o) : engine(std::move(e)), options(std::move(o)), acceptor(ioc) {}

  // Network thread.
  void join(const std::shared_ptr<WsSession>& s) override {
    sessions.insert(s);
    if (latest) s->send(latest);
  }
  void leave(WsSession* s) override {
    for (auto it = sessions.begin(); it != sessions.end(); ++it)
      if (it->get() == s) {
        sessions.erase(it);
        break;
      }
  }
  void on_message(const std::shared_ptr<WsSession>& s, const std::string& text) override {
    try {
      Pending p{io::parse_command(text), s};
      std::lock_guard lock(queue_mutex);
      commands.push_back(std::move(p));
    } catch (const io::CommandError& e) {
      s->send(std::make_shared<const std::string>(io::error_frame(e.what()).dump()));
    }
  }
  void broadcast(std::shared_ptr<const std::string> frame) {
    latest = frame;
    for (const auto& s : sessions) s->send(frame);
  }

  void accept() {
    acceptor.async_accept(ioc, [this](beast::error_code ec, tcp::socket socket) {
      if (ec) return;
      std::make_shared<HttpSession>(std::move(socket), *this, options.static_dir)->run();
      accept();
    });
  }

  // Simulation thread.
  void sim_loop() {
    using clock = std::chrono::steady_clock;
    const auto period = std::chrono::duration_cast<clock::duration>(
        std::chrono::duration<double>(engine.config().dt()));
    const auto every =
        std::max<long>(1, static_cast<long>(std::floor(engine.config().control_rate / options.frame_rate)));
    auto next = clock::now();
    long tick = 0;
    while (!stopping.load()) {
      std::deque<Pending> batch;
      {
        std::lock_guard lock(queue_mutex);
        batch.swap(commands);
      }
      for (auto& p : batch) {
        try {
          apply_command(engine, p.command);
        } catch (const std::exception& e) {
          auto msg = std::make_shared<const std::string>(io::error_frame(e.what()).dump());
          asio::post(ioc, [from = p.from, msg] {
            if (auto s = from.lock()) s->send(msg);
          });
        }
      }

      const auto records = engine.step();
      if (tick++ % every == 0) {
        auto frame = std::make_shared<const std::string>(io::state_frame(records, engine.target()).dump());
        asio::post(ioc, [this, frame] { broadcast(frame); });
      }

      next += period;
      const auto now = clock::now();
      if (now - next > std::chrono::milliseconds(250)) next = now; // fell far behind; do not burst
      std::this_thread::sleep_until(next);
    }
  }

  sim::Engine engine;
  ServeOptions options;

  asio::io_context ioc;
  tcp::acceptor acceptor;
  std::set<std::shared_ptr<WsSession>> sessions;
  std::shared_ptr<const std::string> latest;

  std::mutex queue_mutex;
  std::deque<Pending> commands;

  std::atomic<bool> stopping{false};
  std::thread net_thread;
  std::thread sim_thread;
  bool started = false;
  unsigned short bound_port = 0;
};

StateServer::StateServer(sim::Engine engine, ServeOptions options)
    : impl_(std::make_unique<Impl>(std::move(engine), std::move(options))) {
  if (!(impl_->options.frame_rate > 0)) throw std::invalid_argument("serve: frame_rate must be positive");
}

StateServer::~StateServer() { stop(); }

void StateServer::start() {
  if (impl_->started) return;
  Impl& s = *impl_;
  const tcp::endpoint endpoint(asio::ip::make_address(s.options.address), s.options.port);
  s.acceptor.open(endpoint.protocol());
  s.acceptor.set_option(asio::socket_base::reuse_address(true));
  s.acceptor.bind(endpoint);
  s.acceptor.listen(asio::socket_base::max_listen_connections);
  s.bound_port = s.acceptor.local_endpoint().port();
  s.accept();

  s.started = true;
  s.net_thread = std::thread([&s] { s.ioc.run(); });
  s.sim_thread = std::thread([&s] { s.sim_loop(); });
}

void StateServer::stop() {
  Impl& s = *impl_;
  if (!s.started) return;
  s.started = false;
  s.stopping = true;
  if (s.sim_thread.joinable()) s.sim_thread.join();
  asio::post(s.ioc, [&s] {
    beast::error_code ignored;
    s.acceptor.close(ignored);
    for (const auto& session : s.sessions) session->close();
    s.sessions.clear();
  });
  // Give close frames a moment to go out before tearing the loop down.
  std::this_thread::sleep_for(std::chrono::milliseconds(50));
  s.ioc.stop();
  if (s.net_thread.joinable()) s.net_thread.join();
}

unsigned short StateServer::port() const { return impl_->bound_port; }

}  // namespace ocular::serve
