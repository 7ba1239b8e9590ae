#include "lumitact/server.hpp"

#include <atomic>
#include <chrono>
#include <deque>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast.hpp>

namespace lumitact {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

// Outbound state frames beyond this backlog are dropped; the simulation
// keeps stepping regardless.
constexpr std::size_t kMaxBacklog = 128;

class Registry {
public:
    std::string next_id() { return "s" + std::to_string(++counter_); }
    int counter() const { return counter_; }

    void register_session(const std::string& id)
    {
        std::lock_guard lock(mutex_);
        logs_.emplace(id, nullptr);
    }

    void publish(const std::string& id, std::string text)
    {
        std::lock_guard lock(mutex_);
        logs_[id] = std::make_shared<const std::string>(std::move(text));
    }

    // nullopt: unknown session; nullptr: not finished yet.
    std::optional<std::shared_ptr<const std::string>> find(const std::string& id) const
    {
        std::lock_guard lock(mutex_);
        auto it = logs_.find(id);
        if (it == logs_.end())
            return std::nullopt;
        return it->second;
    }

private:
    mutable std::mutex mutex_;
    std::map<std::string, std::shared_ptr<const std::string>> logs_;
    std::atomic<int> counter_{0};
};

void log_error(beast::error_code ec, const char* what)
{
    if (ec == net::error::operation_aborted || ec == websocket::error::closed || ec == net::error::eof)
        return;
    std::cerr << "serve: " << what << ": " << ec.message() << "\n";
}

class WebsocketSession : public std::enable_shared_from_this<WebsocketSession> {
public:
    WebsocketSession(tcp::socket&& socket, Session session, Registry& registry)
        : ws_(std::move(socket)), timer_(ws_.get_executor()), session_(std::move(session)), registry_(registry)
    {
    }

    void run(http::request<http::string_body> request)
    {
        ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
        ws_.async_accept(request, beast::bind_front_handler(&WebsocketSession::on_accept, shared_from_this()));
    }

private:
    void on_accept(beast::error_code ec)
    {
        if (ec)
            return log_error(ec, "accept");
        send(session_.hello());
        period_ = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
            std::chrono::duration<double>(1.0 / session_.stream_rate_hz()));
        next_tick_ = std::chrono::steady_clock::now() + period_;
        schedule_tick();
        do_read();
    }

    void do_read()
    {
        ws_.async_read(buffer_, beast::bind_front_handler(&WebsocketSession::on_read, shared_from_this()));
    }

    void on_read(beast::error_code ec, std::size_t)
    {
        if (ec) {
            timer_.cancel();
            return log_error(ec, "read");
        }
        const std::string frame = beast::buffers_to_string(buffer_.data());
        buffer_.consume(buffer_.size());
        for (const auto& reply : session_.handle_text(frame))
            send(reply);
        publish_if_finished();
        if (session_.closed()) {
            timer_.cancel();
            closing_ = true;
            maybe_close();
            return;
        }
        do_read();
    }

    void schedule_tick()
    {
        timer_.expires_at(next_tick_);
        timer_.async_wait(beast::bind_front_handler(&WebsocketSession::on_tick, shared_from_this()));
    }

    void on_tick(beast::error_code ec)
    {
        if (ec || session_.closed())
            return;
        // One fixed block of simulation steps per timer period; late timers
        // fire back to back so no steps are skipped.
        for (const auto& message : session_.tick())
            send(message);
        publish_if_finished();
        next_tick_ += period_;
        schedule_tick();
    }

    void publish_if_finished()
    {
        if (!published_ && session_.phase() == SessionPhase::Finished) {
            registry_.publish(session_.id(), session_.log_text());
            published_ = true;
        }
    }

    void send(const nlohmann::json& message)
    {
        if (closing_)
            return;
        if (queue_.size() >= kMaxBacklog && message.value("type", "") == "state")
            return;
        queue_.push_back(message.dump());
        if (!writing_)
            do_write();
    }

    void do_write()
    {
        writing_ = true;
        ws_.text(true);
        ws_.async_write(net::buffer(queue_.front()),
                        beast::bind_front_handler(&WebsocketSession::on_write, shared_from_this()));
    }

    void on_write(beast::error_code ec, std::size_t)
    {
        writing_ = false;
        if (ec) {
            timer_.cancel();
            return log_error(ec, "write");
        }
        queue_.pop_front();
        if (!queue_.empty())
            return do_write();
        maybe_close();
    }

    void maybe_close()
    {
        if (!closing_ || writing_ || !queue_.empty() || close_sent_)
            return;
        close_sent_ = true;
        ws_.async_close(websocket::close_code::normal,
                        [self = shared_from_this()](beast::error_code ec) {
                            if (ec)
                                log_error(ec, "close");
                        });
    }

    websocket::stream<beast::tcp_stream> ws_;
    net::steady_timer timer_;
    beast::flat_buffer buffer_;
    Session session_;
    Registry& registry_;
    std::deque<std::string> queue_;
    bool writing_ = false;
    bool closing_ = false;
    bool close_sent_ = false;
    bool published_ = false;
    std::chrono::steady_clock::duration period_{};
    std::chrono::steady_clock::time_point next_tick_{};
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
public:
    HttpSession(tcp::socket&& socket, const SessionSettings& settings, Registry& registry)
        : stream_(std::move(socket)), settings_(settings), registry_(registry)
    {
    }

    void run()
    {
        net::dispatch(stream_.get_executor(),
                      beast::bind_front_handler(&HttpSession::do_read, shared_from_this()));
    }

private:
    void do_read()
    {
        request_ = {};
        stream_.expires_after(std::chrono::seconds(30));
        http::async_read(stream_, buffer_, request_,
                         beast::bind_front_handler(&HttpSession::on_read, shared_from_this()));
    }

    void on_read(beast::error_code ec, std::size_t)
    {
        if (ec)
            return log_error(ec, "http read");
        if (websocket::is_upgrade(request_)) {
            const std::string id = registry_.next_id();
            SessionSettings settings = settings_;
            settings.trial_index = registry_.counter();
            registry_.register_session(id);
            stream_.expires_never();
            std::make_shared<WebsocketSession>(stream_.release_socket(), Session(id, settings), registry_)
                ->run(std::move(request_));
            return;
        }
        respond();
    }

    void respond()
    {
        auto response = std::make_shared<http::response<http::string_body>>();
        response->version(request_.version());
        response->keep_alive(false);
        response->set(http::field::server, "lumitact");
        const std::string target(request_.target());
        const std::string prefix = "/sessions/";
        const std::string suffix = "/log";
        auto reply = [&](http::status status, std::string body, const char* type) {
            response->result(status);
            response->set(http::field::content_type, type);
            response->body() = std::move(body);
        };
        if (request_.method() != http::verb::get) {
            reply(http::status::method_not_allowed, "GET only\n", "text/plain");
        } else if (target == "/health") {
            reply(http::status::ok, "ok\n", "text/plain");
        } else if (target.size() > prefix.size() + suffix.size() && target.rfind(prefix, 0) == 0
                   && target.compare(target.size() - suffix.size(), suffix.size(), suffix) == 0) {
            const std::string id = target.substr(prefix.size(), target.size() - prefix.size() - suffix.size());
            const auto found = registry_.find(id);
            if (!found)
                reply(http::status::not_found, "unknown session\n", "text/plain");
            else if (!*found)
                reply(http::status::conflict, "trial not finished\n", "text/plain");
            else
                reply(http::status::ok, **found, "application/x-ndjson");
        } else {
            reply(http::status::not_found, "not found\n", "text/plain");
        }
        response->prepare_payload();
        http::async_write(stream_, *response,
                          [self = shared_from_this(), response](beast::error_code ec, std::size_t) {
                              if (ec)
                                  log_error(ec, "http write");
                              beast::error_code ignored;
                              self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
                          });
    }

    beast::tcp_stream stream_;
    beast::flat_buffer buffer_;
    http::request<http::string_body> request_;
    const SessionSettings& settings_;
    Registry& registry_;
};

}  // namespace

struct SessionServer::Impl {
    ServerSettings settings;
    net::io_context ioc;
    tcp::acceptor acceptor{ioc};
    Registry registry;
    std::thread thread;
    bool running = false;

    void do_accept()
    {
        acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
            if (ec) {
                log_error(ec, "accept");
                if (!acceptor.is_open())
                    return;
            } else {
                std::make_shared<HttpSession>(std::move(socket), settings.session, registry)->run();
            }
            do_accept();
        });
    }
};

SessionServer::SessionServer(ServerSettings settings) : impl_(std::make_unique<Impl>())
{
    // Fails early on an invalid scenario or stream rate.
    Session probe("probe", settings.session);
    impl_->settings = std::move(settings);
}

SessionServer::~SessionServer()
{
    stop();
}

void SessionServer::start()
{
    if (impl_->running)
        return;
    const tcp::endpoint endpoint(net::ip::make_address(impl_->settings.address), impl_->settings.port);
    impl_->acceptor.open(endpoint.protocol());
    impl_->acceptor.set_option(net::socket_base::reuse_address(true));
    impl_->acceptor.bind(endpoint);
    impl_->acceptor.listen(net::socket_base::max_listen_connections);
    impl_->do_accept();
    impl_->running = true;
    impl_->thread = std::thread([this] { impl_->ioc.run(); });
}

void SessionServer::stop()
{
    if (!impl_ || !impl_->running)
        return;
    impl_->ioc.stop();
    if (impl_->thread.joinable())
        impl_->thread.join();
    beast::error_code ignored;
    impl_->acceptor.close(ignored);
    impl_->running = false;
}

void SessionServer::run_until_signal()
{
    start();
    net::io_context signals_ioc;
    net::signal_set signals(signals_ioc, SIGINT, SIGTERM);
    signals.async_wait([](beast::error_code, int) {});
    signals_ioc.run();
    stop();
}

std::uint16_t SessionServer::port() const
{
    return impl_->acceptor.local_endpoint().port();
}

}  // namespace lumitact
