#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "lumitact/session.hpp"

namespace lumitact {

struct ServerSettings {
    std::string address = "127.0.0.1";
    std::uint16_t port = 8765;  // 0 picks a free port
    SessionSettings session;    // template for every new session
};

/// Websocket endpoint for interactive sessions plus plain HTTP log download.
///
///   ws://host:port/         one Session per connection
///   GET /sessions/<id>/log  finished session log (JSONL)
///   GET /health
///
/// Each connection runs on its own strand; sessions share nothing but the
/// registry of finished logs.
class SessionServer {
public:
    explicit SessionServer(ServerSettings settings);
    ~SessionServer();

    SessionServer(const SessionServer&) = delete;
    SessionServer& operator=(const SessionServer&) = delete;

    /// Binds and starts serving on a background thread.
    void start();
    void stop();
    /// start(), then block until SIGINT/SIGTERM.
    void run_until_signal();

    std::uint16_t port() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace lumitact
