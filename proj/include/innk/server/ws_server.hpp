#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include "innk/server/registry.hpp"

namespace innk::server {

struct WsServerOptions {
  std::string host = "127.0.0.1";
  /// 0 picks an ephemeral port; see WsServer::port().
  std::uint16_t port = 8080;
  /// Serves files under this directory for plain HTTP GETs. Empty disables.
  std::filesystem::path static_root;
  std::chrono::milliseconds timer_interval{100};
  std::chrono::milliseconds ping_interval{15'000};
  /// Consecutive unanswered pings before a session is dropped.
  int max_missed_pings = 2;
};

/// WebSocket front end for a RoomRegistry: upgrades requests for /ws, relays
/// one JSON message per text frame, and drives room timers. Everything runs on
/// one thread, which is what serializes access to the registry.
class WsServer {
 public:
  WsServer(RoomRegistry& registry, WsServerOptions options);
  ~WsServer();

  WsServer(const WsServer&) = delete;
  WsServer& operator=(const WsServer&) = delete;

  /// Bound port, valid after construction.
  std::uint16_t port() const noexcept;
  /// Blocks until stop().
  void run();
  /// Safe from any thread.
  void stop();

  /// Wall-clock milliseconds since the Unix epoch, the server's timestamp base.
  static Timestamp now();

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

}  // namespace innk::server
