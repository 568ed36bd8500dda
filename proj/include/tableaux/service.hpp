// HTTP+JSON facade over sessions, one-shot checks and renderings.
//
// Routing and error mapping live in Api, which knows nothing about sockets;
// Server binds it to cpp-httplib.

#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tableaux/session.hpp"

namespace tableaux {

/// Every non-2xx body is {"code","message","detail"}.
class ApiError : public std::runtime_error {
 public:
  ApiError(int status, std::string code, std::string message,
           nlohmann::json detail = nullptr);

  int status() const noexcept { return status_; }
  const std::string& code() const noexcept { return code_; }
  const nlohmann::json& detail() const noexcept { return detail_; }

 private:
  int status_;
  std::string code_;
  nlohmann::json detail_;
};

nlohmann::json toJson(const ApiError& e);

/// The closed set of codes an error body may carry.
const std::vector<std::string>& documentedErrorCodes();

struct CheckRequest {
  std::string kind;  // sat | valid | entails | dnf | truthtable
  std::vector<std::string> formulas;
  std::string method = "tableau";  // dnf only: tableau | complete | rewrite
};

CheckRequest checkRequestFromJson(const nlohmann::json& j);

/// Stateless one-shot evaluation shared by POST /api/check and `--json` on
/// the command line. Throws ParseError, CapacityError or std::invalid_argument.
nlohmann::json runCheck(const CheckRequest& request);

/// Maps any exception escaping a handler to its ApiError.
ApiError toApiError(const std::exception& e);

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

class Api {
 public:
  explicit Api(SessionStore& store) : store_(store) {}

  ApiResponse createSession(const std::string& body);
  ApiResponse getSession(const std::string& id);
  ApiResponse step(const std::string& id, const std::string& body);
  ApiResponse autoFinish(const std::string& id);
  ApiResponse analysis(const std::string& id);
  ApiResponse check(const std::string& body);

  /// Routes an /api request. Unknown paths give 404 NOT_FOUND, known paths
  /// with the wrong verb 405 METHOD_NOT_ALLOWED.
  ApiResponse handle(const std::string& method, const std::string& path, const std::string& body);

 private:
  SessionStore& store_;
};

struct ServerConfig {
  std::string host = "127.0.0.1";
  int port = 7070;
  std::optional<std::filesystem::path> uiDir;
  /// Value of Access-Control-Allow-Origin; unset disables CORS headers.
  std::optional<std::string> corsOrigin;
  std::optional<std::filesystem::path> snapshotDir;
};

/// Overrides host, port and CORS origin from TABLEAUX_HOST, TABLEAUX_PORT
/// and TABLEAUX_CORS_ORIGIN. Throws std::invalid_argument on a bad port.
void applyEnvironment(ServerConfig& config,
                      const std::function<const char*(const char*)>& getenv = nullptr);

class Server {
 public:
  Server(ServerConfig config, SessionStore& store);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds the socket; port 0 picks a free port. Returns the bound port.
  int bind();
  /// Serves until stop(). Requires bind().
  void run();
  /// Blocks until run() accepts connections.
  void waitUntilReady() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace tableaux
