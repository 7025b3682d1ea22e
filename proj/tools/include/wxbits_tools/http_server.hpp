#pragma once

#include <memory>
#include <string>
#include <thread>

#include "wxbits/api.hpp"

namespace wxbits::tools {

// HTTP/1.1 front end for Api. Requests run on the server's worker threads.
class HttpServer {
 public:
  explicit HttpServer(const Api& api);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds (port 0 picks a free one) and serves in the background. Returns
  // the bound port; throws Internal when binding fails.
  int start(const std::string& host, int port);
  // Serves on the calling thread until stop().
  void run(const std::string& host, int port);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::thread thread_;
};

}  // namespace wxbits::tools
