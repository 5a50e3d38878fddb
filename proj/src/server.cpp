#include "doris/server.hpp"

#include <charconv>
#include <mutex>

#include "httplib.h"

namespace doris {

std::pair<std::string, int> parseBindAddress(std::string_view address) {
  const auto colon = address.rfind(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw InvalidArgument("bind address must be host:port, got '" + std::string(address) + "'",
                          std::string(address));
  }
  int port = -1;
  const auto digits = address.substr(colon + 1);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
  if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size() || port < 0 ||
      port > 65535) {
    throw InvalidArgument("invalid port in '" + std::string(address) + "'", std::string(address));
  }
  return {std::string(address.substr(0, colon)), port};
}

struct Server::Impl {
  ServerOptions options;
  httplib::Server http;
  mutable std::mutex mutex;  // guards `index` only; requests copy the pointer
  std::shared_ptr<const SearchIndex> index;
  std::mutex reloadMutex;

  std::shared_ptr<const SearchIndex> current() const {
    std::lock_guard lock(mutex);
    return index;
  }

  static void send(httplib::Response& res, const ApiResponse& api, const SearchIndex* index) {
    res.status = api.status;
    res.set_header("Cache-Control", "no-store");
    if (index != nullptr) res.set_header(std::string(kCorpusVersionHeader), index->buildHash());
    res.set_content(api.body, api.contentType);
  }

  // Runs `fn` against the pinned snapshot, or answers 503 while loading.
  template <typename Fn>
  void withIndex(httplib::Response& res, Fn&& fn) const {
    auto snap = current();
    if (!snap) {
      send(res, errorResponse(503, "index is loading"), nullptr);
      return;
    }
    send(res, fn(*snap), snap.get());
  }

  void routes() {
    http.Get("/api/health", [this](const httplib::Request&, httplib::Response& res) {
      auto snap = current();
      send(res, handleHealth(snap.get()), snap.get());
    });
    http.Get("/api/search", [this](const httplib::Request& req, httplib::Response& res) {
      withIndex(res, [&](const SearchIndex& i) { return handleSearch(i, req.params, options.api); });
    });
    http.Get("/api/aggregate", [this](const httplib::Request& req, httplib::Response& res) {
      withIndex(res, [&](const SearchIndex& i) { return handleAggregate(i, req.params); });
    });
    http.Get("/api/topics", [this](const httplib::Request&, httplib::Response& res) {
      withIndex(res, [](const SearchIndex& i) { return handleTopics(i); });
    });
    http.Get(R"(/api/documents/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.matches[1];
      withIndex(res, [&](const SearchIndex& i) { return handleDocument(i, id); });
    });
    if (options.adminReload) {
      http.Post("/api/admin/reload", [this](const httplib::Request&, httplib::Response& res) {
        auto error = reload();
        auto snap = current();
        if (!error.empty()) {
          send(res, errorResponse(500, error), snap.get());
        } else {
          send(res, handleHealth(snap.get()), snap.get());
        }
      });
    }
    if (!options.staticDir.empty()) http.set_mount_point("/", options.staticDir.string());
  }

  std::string reload() {
    std::lock_guard serial(reloadMutex);
    try {
      auto fresh = std::make_shared<const SearchIndex>(SearchIndex::load(options.indexPath));
      std::lock_guard lock(mutex);
      index = std::move(fresh);
      return {};
    } catch (const std::exception& e) {
      return e.what();
    }
  }
};

Server::Server(ServerOptions options) : impl_(std::make_unique<Impl>()) {
  impl_->options = std::move(options);
  impl_->routes();
}

Server::~Server() { stop(); }

int Server::bind() {
  auto& o = impl_->options;
  if (o.port == 0) {
    const int port = impl_->http.bind_to_any_port(o.host);
    if (port < 0) throw IoError("cannot bind " + o.host, o.host);
    return port;
  }
  if (!impl_->http.bind_to_port(o.host, o.port)) {
    const auto where = o.host + ":" + std::to_string(o.port);
    throw IoError("cannot bind " + where, where);
  }
  return o.port;
}

void Server::listen() { impl_->http.listen_after_bind(); }

void Server::stop() {
  if (impl_ && impl_->http.is_running()) impl_->http.stop();
}

void Server::setIndex(std::shared_ptr<const SearchIndex> index) {
  std::lock_guard lock(impl_->mutex);
  impl_->index = std::move(index);
}

std::shared_ptr<const SearchIndex> Server::snapshot() const { return impl_->current(); }

std::string Server::reload() { return impl_->reload(); }

}  // namespace doris
