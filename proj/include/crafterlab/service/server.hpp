#pragma once

#include <array>
#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "crafterlab/service/protocol.hpp"

namespace crafterlab {

namespace asio = boost::asio;
using tcp = asio::ip::tcp;

namespace detail {

class StreamConnection : public std::enable_shared_from_this<StreamConnection> {
 public:
  StreamConnection(tcp::socket socket, LiveSessionManager& m) : socket_(std::move(socket)), m_(m) {}

  void start() { read(); }

 private:
  void read() {
    auto self = shared_from_this();
    socket_.async_read_some(asio::buffer(chunk_), [self](boost::system::error_code ec, std::size_t n) {
      if (ec) return;
      std::string out;
      try {
        self->decoder_.feed({self->chunk_.data(), n});
        while (auto rec = self->decoder_.next()) out += encode_record(handle_request_text(self->m_, *rec));
      } catch (const InputError& e) {
        out += encode_record(error_record("input", e.what()).dump());
        self->pending_ = std::move(out);
        asio::async_write(self->socket_, asio::buffer(self->pending_),
                          [self](boost::system::error_code, std::size_t) { self->socket_.close(); });
        return;
      }
      self->write(std::move(out));
    });
  }

  void write(std::string out) {
    if (out.empty()) return read();
    pending_ = std::move(out);
    auto self = shared_from_this();
    asio::async_write(socket_, asio::buffer(pending_), [self](boost::system::error_code ec, std::size_t) {
      if (!ec) self->read();
    });
  }

  tcp::socket socket_;
  LiveSessionManager& m_;
  RecordDecoder decoder_;
  std::array<char, 8192> chunk_{};
  std::string pending_;
};

class WebSocketConnection : public std::enable_shared_from_this<WebSocketConnection> {
 public:
  WebSocketConnection(tcp::socket socket, LiveSessionManager& m) : ws_(std::move(socket)), m_(m) {}

  void start() {
    ws_.read_message_max(kMaxRecordBytes);
    auto self = shared_from_this();
    ws_.async_accept([self](boost::beast::error_code ec) {
      if (!ec) self->read();
    });
  }

 private:
  void read() {
    auto self = shared_from_this();
    buffer_.clear();
    ws_.async_read(buffer_, [self](boost::beast::error_code ec, std::size_t) {
      if (ec) return;
      self->pending_ = handle_request_text(self->m_, boost::beast::buffers_to_string(self->buffer_.data()));
      self->ws_.text(true);
      self->ws_.async_write(asio::buffer(self->pending_), [self](boost::beast::error_code ec2, std::size_t) {
        if (!ec2) self->read();
      });
    });
  }

  boost::beast::websocket::stream<tcp::socket> ws_;
  LiveSessionManager& m_;
  boost::beast::flat_buffer buffer_;
  std::string pending_;
};

}  // namespace detail

struct ServerOptions {
  std::string address = "127.0.0.1";
  unsigned short port = 7777;                       // length-prefixed records
  std::optional<unsigned short> websocket_port;     // one JSON record per message
  std::chrono::milliseconds expiry_interval{1000};
};

// Serves the session protocol on one thread. Port 0 picks a free port.
class Server {
 public:
  Server(LiveSessionManager& m, ServerOptions opts)
      : m_(m), opts_(std::move(opts)), stream_acceptor_(io_), ws_acceptor_(io_), timer_(io_) {
    const auto addr = asio::ip::make_address(opts_.address);
    open(stream_acceptor_, {addr, opts_.port});
    if (opts_.websocket_port) open(ws_acceptor_, {addr, *opts_.websocket_port});
  }

  unsigned short port() const { return stream_acceptor_.local_endpoint().port(); }
  std::optional<unsigned short> websocket_port() const {
    if (!ws_acceptor_.is_open()) return std::nullopt;
    return ws_acceptor_.local_endpoint().port();
  }

  void run() {
    accept_stream();
    if (ws_acceptor_.is_open()) accept_ws();
    schedule_expiry();
    io_.run();
  }

  void stop() {
    asio::post(io_, [this] { io_.stop(); });
  }

 private:
  static void open(tcp::acceptor& a, const tcp::endpoint& ep) {
    a.open(ep.protocol());
    a.set_option(tcp::acceptor::reuse_address(true));
    a.bind(ep);
    a.listen();
  }

  void accept_stream() {
    stream_acceptor_.async_accept([this](boost::system::error_code ec, tcp::socket s) {
      if (!ec) std::make_shared<detail::StreamConnection>(std::move(s), m_)->start();
      accept_stream();
    });
  }

  void accept_ws() {
    ws_acceptor_.async_accept([this](boost::system::error_code ec, tcp::socket s) {
      if (!ec) std::make_shared<detail::WebSocketConnection>(std::move(s), m_)->start();
      accept_ws();
    });
  }

  void schedule_expiry() {
    timer_.expires_after(opts_.expiry_interval);
    timer_.async_wait([this](boost::system::error_code ec) {
      if (ec) return;
      m_.expire();
      schedule_expiry();
    });
  }

  LiveSessionManager& m_;
  ServerOptions opts_;
  asio::io_context io_;
  tcp::acceptor stream_acceptor_;
  tcp::acceptor ws_acceptor_;
  asio::steady_timer timer_;
};

}  // namespace crafterlab
