#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include "doris/api.hpp"
#include "doris/search_index.hpp"

namespace doris {

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::filesystem::path indexPath;
  std::filesystem::path staticDir;  // served under / when set
  bool adminReload = false;         // enables POST /api/admin/reload
  ApiOptions api;
};

/// Splits `host:port`; throws InvalidArgument.
std::pair<std::string, int> parseBindAddress(std::string_view address);

/// HTTP front end over an immutable index snapshot. Each request pins the
/// snapshot current when it starts, so a reload never disturbs requests in
/// flight. Until an index is installed every /api route except /api/health
/// answers 503.
class Server {
 public:
  explicit Server(ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds the listening socket and returns the port. Throws IoError.
  int bind();
  /// Serves until stop(); call bind() first.
  void listen();
  void stop();

  void setIndex(std::shared_ptr<const SearchIndex> index);
  std::shared_ptr<const SearchIndex> snapshot() const;

  /// Loads options.indexPath and swaps it in. On failure the current
  /// snapshot stays and the error message is returned; empty on success.
  std::string reload();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace doris
