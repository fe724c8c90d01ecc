#include "innk/server/ws_server.hpp"

#include <deque>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unordered_map>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

namespace innk::server {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

constexpr auto kHttpTimeout = std::chrono::seconds(30);

std::string_view mime_type(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  if (ext == ".html" || ext == ".htm") return "text/html; charset=utf-8";
  if (ext == ".js" || ext == ".mjs") return "text/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json" || ext == ".map") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  if (ext == ".ico") return "image/x-icon";
  if (ext == ".wasm") return "application/wasm";
  return "application/octet-stream";
}

/// Maps a request target onto a file under root, refusing anything that
/// escapes it.
std::optional<std::filesystem::path> resolve(const std::filesystem::path& root,
                                             std::string_view target) {
  target = target.substr(0, target.find_first_of("?#"));
  if (target.empty() || target.front() != '/') return std::nullopt;
  std::filesystem::path rel(std::string(target.substr(1)));
  for (const auto& part : rel)
    if (part == "..") return std::nullopt;
  auto full = root / rel;
  std::error_code ec;
  if (std::filesystem::is_directory(full, ec)) full /= "index.html";
  if (!std::filesystem::is_regular_file(full, ec)) return std::nullopt;
  return full;
}

}  // namespace

class WsSession;

struct WsServer::Impl {
  Impl(RoomRegistry& r, WsServerOptions o)
      : registry(r), options(std::move(o)), acceptor(ioc), timer(ioc) {}

  void accept();
  void arm_timer();
  void deliver(const std::vector<Outbound>& out);

  RoomRegistry& registry;
  WsServerOptions options;
  net::io_context ioc{1};
  tcp::acceptor acceptor;
  net::steady_timer timer;
  std::unordered_map<SessionId, std::weak_ptr<WsSession>> sessions;
  SessionId next_session = 1;
};

class WsSession : public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket socket, WsServer::Impl& server)
      : ws_(std::move(socket)), server_(server), ping_timer_(server.ioc) {}

  void accept(http::request<http::string_body> req) {
    websocket::stream_base::timeout t{};
    t.handshake_timeout = kHttpTimeout;
    t.idle_timeout = websocket::stream_base::none();
    t.keep_alive_pings = false;
    ws_.set_option(t);
    ws_.read_message_max(1 << 20);
    ws_.control_callback([this](websocket::frame_type kind, beast::string_view) {
      if (kind == websocket::frame_type::pong) missed_ = 0;
    });
    ws_.async_accept(req, beast::bind_front_handler(&WsSession::on_accept, shared_from_this()));
  }

  void send(const std::string& frame) {
    if (closed_) return;
    queue_.push_back(frame);
    if (queue_.size() == 1) write_next();
  }

  void drop() {
    beast::error_code ec;
    beast::get_lowest_layer(ws_).socket().close(ec);
  }

 private:
  void on_accept(beast::error_code ec) {
    if (ec) return;
    id_ = server_.next_session++;
    server_.sessions[id_] = weak_from_this();
    read();
    arm_ping();
  }

  void read() {
    ws_.async_read(buffer_, beast::bind_front_handler(&WsSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) return finish();
    missed_ = 0;
    const auto frame = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    try {
      server_.deliver(server_.registry.handle_message(id_, frame, WsServer::now()));
    } catch (const std::exception& e) {
      send(encode::error("internal", e.what()));
    }
    read();
  }

  void write_next() {
    ws_.text(true);
    ws_.async_write(net::buffer(queue_.front()),
                    beast::bind_front_handler(&WsSession::on_write, shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t) {
    if (ec) return finish();
    queue_.pop_front();
    if (!queue_.empty()) write_next();
  }

  void arm_ping() {
    ping_timer_.expires_after(server_.options.ping_interval);
    ping_timer_.async_wait([self = shared_from_this()](beast::error_code ec) {
      if (!ec) self->on_ping_due();
    });
  }

  void on_ping_due() {
    if (closed_) return;
    if (missed_ >= server_.options.max_missed_pings) return drop();
    ++missed_;
    if (!ping_in_flight_) {
      ping_in_flight_ = true;
      ws_.async_ping({}, [self = shared_from_this()](beast::error_code) {
        self->ping_in_flight_ = false;
      });
    }
    arm_ping();
  }

  void finish() {
    if (closed_) return;
    closed_ = true;
    ping_timer_.cancel();
    drop();
    if (id_ == 0) return;
    server_.sessions.erase(id_);
    server_.deliver(server_.registry.disconnect(id_, WsServer::now()));
  }

  websocket::stream<beast::tcp_stream> ws_;
  WsServer::Impl& server_;
  net::steady_timer ping_timer_;
  beast::flat_buffer buffer_;
  std::deque<std::string> queue_;
  SessionId id_ = 0;
  int missed_ = 0;
  bool ping_in_flight_ = false;
  bool closed_ = false;
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket socket, WsServer::Impl& server)
      : stream_(std::move(socket)), server_(server) {}

  void read() {
    req_ = {};
    stream_.expires_after(kHttpTimeout);
    http::async_read(stream_, buffer_, req_,
                     beast::bind_front_handler(&HttpSession::on_read, shared_from_this()));
  }

 private:
  void on_read(beast::error_code ec, std::size_t) {
    if (ec) return close();
    if (websocket::is_upgrade(req_)) {
      if (req_.target() != "/ws") return respond(http::status::not_found, "no such endpoint\n");
      stream_.expires_never();
      std::make_shared<WsSession>(stream_.release_socket(), server_)->accept(std::move(req_));
      return;
    }
    if (req_.method() != http::verb::get && req_.method() != http::verb::head) {
      return respond(http::status::method_not_allowed, "method not allowed\n");
    }
    if (server_.options.static_root.empty()) {
      return respond(http::status::not_found, "not found\n");
    }
    std::string target(req_.target());
    if (target == "/") target = "/index.html";
    const auto path = resolve(server_.options.static_root, target);
    if (!path) return respond(http::status::not_found, "not found\n");
    std::ifstream in(*path, std::ios::binary);
    std::ostringstream body;
    body << in.rdbuf();
    respond(http::status::ok, body.str(), mime_type(*path));
  }

  void respond(http::status status, std::string body,
               std::string_view type = "text/plain; charset=utf-8") {
    auto res = std::make_shared<http::response<http::string_body>>(status, req_.version());
    res->set(http::field::content_type, beast::string_view(type.data(), type.size()));
    res->keep_alive(req_.keep_alive());
    const bool head = req_.method() == http::verb::head;
    res->body() = head ? std::string() : std::move(body);
    res->prepare_payload();
    if (head) res->content_length(body.size());
    http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code ec, std::size_t) {
      if (ec || !res->keep_alive()) return self->close();
      self->read();
    });
  }

  void close() {
    beast::error_code ec;
    stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
  }

  beast::tcp_stream stream_;
  WsServer::Impl& server_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
};

void WsServer::Impl::accept() {
  acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
    if (ec == net::error::operation_aborted) return;
    if (!ec) std::make_shared<HttpSession>(std::move(socket), *this)->read();
    accept();
  });
}

void WsServer::Impl::arm_timer() {
  timer.expires_after(options.timer_interval);
  timer.async_wait([this](beast::error_code ec) {
    if (ec) return;
    try {
      deliver(registry.run_timers(WsServer::now()));
    } catch (const std::exception& e) {
      std::cerr << "timer: " << e.what() << "\n";
    }
    arm_timer();
  });
}

void WsServer::Impl::deliver(const std::vector<Outbound>& out) {
  for (const auto& o : out) {
    const auto it = sessions.find(o.to);
    if (it == sessions.end()) continue;
    if (auto s = it->second.lock()) s->send(o.frame);
  }
}

WsServer::WsServer(RoomRegistry& registry, WsServerOptions options)
    : impl_(std::make_unique<Impl>(registry, std::move(options))) {
  const tcp::endpoint endpoint(net::ip::make_address(impl_->options.host), impl_->options.port);
  impl_->acceptor.open(endpoint.protocol());
  impl_->acceptor.set_option(net::socket_base::reuse_address(true));
  impl_->acceptor.bind(endpoint);
  impl_->acceptor.listen(net::socket_base::max_listen_connections);
  impl_->accept();
  impl_->arm_timer();
}

WsServer::~WsServer() = default;

std::uint16_t WsServer::port() const noexcept { return impl_->acceptor.local_endpoint().port(); }

void WsServer::run() { impl_->ioc.run(); }

void WsServer::stop() {
  net::post(impl_->ioc, [impl = impl_.get()] {
    beast::error_code ec;
    impl->acceptor.close(ec);
    impl->timer.cancel();
    for (auto& [id, weak] : impl->sessions)
      if (auto s = weak.lock()) s->drop();
    impl->ioc.stop();
  });
}

Timestamp WsServer::now() {
  const auto since = std::chrono::system_clock::now().time_since_epoch();
  return at_ms(std::chrono::duration_cast<std::chrono::milliseconds>(since).count());
}

}  // namespace innk::server
