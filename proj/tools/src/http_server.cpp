#include "wxbits_tools/http_server.hpp"

#include <httplib.h>

namespace wxbits::tools {

struct HttpServer::Impl {
  httplib::Server server;
};

namespace {

ApiRequest to_api_request(const httplib::Request& req) {
  ApiRequest out;
  out.method = req.method;
  out.path = req.path;
  out.body = req.body;
  out.content_type = req.get_header_value("Content-Type");
  for (const auto& [key, value] : req.params) out.query.emplace(key, value);
  if (req.is_multipart_form_data() && req.has_file("members")) {
    out.body = req.get_file_value("members").content;
    out.content_type = "text/csv";
  }
  return out;
}

}  // namespace

HttpServer::HttpServer(const Api& api) : impl_(std::make_unique<Impl>()) {
  const auto handler = [&api](const httplib::Request& req, httplib::Response& res) {
    const auto response = api.handle(to_api_request(req));
    res.status = response.status;
    res.set_content(response.body, response.content_type);
  };
  auto& s = impl_->server;
  s.Get(".*", handler);
  s.Post(".*", handler);
  s.Put(".*", handler);
  s.Delete(".*", handler);
  s.Patch(".*", handler);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::start(const std::string& host, int port) {
  auto& s = impl_->server;
  int bound = port;
  if (port == 0) {
    bound = s.bind_to_any_port(host);
  } else if (!s.bind_to_port(host, port)) {
    bound = -1;
  }
  WXBITS_REQUIRE(bound > 0, ErrorCode::Internal,
                 "cannot bind " + host + ":" + std::to_string(port));
  thread_ = std::thread([&s] { s.listen_after_bind(); });
  s.wait_until_ready();
  return bound;
}

void HttpServer::run(const std::string& host, int port) {
  WXBITS_REQUIRE(impl_->server.listen(host, port), ErrorCode::Internal,
                 "cannot listen on " + host + ":" + std::to_string(port));
}

void HttpServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace wxbits::tools
