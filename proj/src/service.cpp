#include "tableaux/service.hpp"

#include <cstdlib>
#include <iostream>
#include <regex>

#include <httplib.h>

#include "tableaux/dnf.hpp"
#include "tableaux/render.hpp"
#include "tableaux/semantics.hpp"
#include "tableaux/tableau.hpp"

namespace tableaux {

using nlohmann::json;

ApiError::ApiError(int status, std::string code, std::string message, json detail)
    : std::runtime_error(std::move(message)),
      status_(status),
      code_(std::move(code)),
      detail_(std::move(detail)) {}

json toJson(const ApiError& e) {
  return {{"code", e.code()}, {"message", e.what()}, {"detail", e.detail()}};
}

const std::vector<std::string>& documentedErrorCodes() {
  static const std::vector<std::string> codes = {
      "MALFORMED_JSON",     "BAD_REQUEST",       "NOT_FOUND",         "METHOD_NOT_ALLOWED",
      "PARSE_ERROR",        "INVALID_ARGUMENT",  "CAPACITY_EXCEEDED", "UNKNOWN_SESSION",
      "SESSION_FINISHED",   "SESSION_NOT_FINISHED", "INVALID_SNAPSHOT", "UNKNOWN_NODE",
      "NOT_A_LEAF",         "NODE_NOT_ON_BRANCH", "NOT_APPLICABLE",   "BRANCH_CLOSED",
      "ALREADY_EXPANDED",   "UNFINISHED_TABLEAU", "INTERNAL_ERROR",
  };
  return codes;
}

namespace {

ApiError badRequest(const std::string& message) { return {400, "BAD_REQUEST", message}; }

json parseBody(const std::string& body) {
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw ApiError(400, "MALFORMED_JSON", "request body is not valid JSON",
                   {{"byte", e.byte}});
  }
}

std::vector<std::string> formulaList(const json& j) {
  if (!j.contains("formulas") || !j["formulas"].is_array())
    throw badRequest("'formulas' must be an array of strings");
  std::vector<std::string> out;
  for (const auto& f : j["formulas"]) {
    if (!f.is_string()) throw badRequest("'formulas' must be an array of strings");
    out.push_back(f.get<std::string>());
  }
  return out;
}

NodeId requireId(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_unsigned())
    throw badRequest(std::string("'") + key + "' must be a non-negative integer");
  return j[key].get<NodeId>();
}

std::string requireString(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string())
    throw badRequest(std::string("'") + key + "' must be a string");
  return j[key].get<std::string>();
}

std::vector<Formula> parseAll(const std::vector<std::string>& texts) {
  std::vector<Formula> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(parse(t));
  return out;
}

const Formula& single(const std::vector<Formula>& fs, const std::string& kind) {
  if (fs.size() != 1) throw std::invalid_argument(kind + " takes exactly one formula");
  return fs.front();
}

json modelJson(const std::optional<Model>& m) { return m ? toJson(*m) : json(nullptr); }

json openBranchesJson(const std::vector<OpenBranch>& branches) {
  json out = json::array();
  for (const auto& b : branches) {
    std::vector<std::string> lits;
    for (const auto& lit : b.literals) lits.push_back(toString(lit));
    out.push_back({{"number", b.number}, {"literals", lits}});
  }
  return out;
}

json vennFor(const Session& s) {
  Formula f = conjoin(s.tableau.gamma());
  if (atoms(f).size() > kMaxVennAtoms) return nullptr;
  return toJson(vennRegions(f));
}

ApiResponse ok(json body, int status = 200) { return {status, std::move(body)}; }

template <class Handler>
ApiResponse guarded(Handler&& handler) {
  try {
    return handler();
  } catch (const std::exception& e) {
    ApiError err = toApiError(e);
    return {err.status(), toJson(err)};
  }
}

}  // namespace

CheckRequest checkRequestFromJson(const json& j) {
  if (!j.is_object()) throw badRequest("request body must be a JSON object");
  CheckRequest r;
  r.kind = requireString(j, "kind");
  static const std::vector<std::string> kinds = {"sat", "valid", "entails", "dnf", "truthtable"};
  if (std::find(kinds.begin(), kinds.end(), r.kind) == kinds.end())
    throw badRequest("unknown kind '" + r.kind + "' (expected sat, valid, entails, dnf or truthtable)");
  r.formulas = formulaList(j);
  if (j.contains("method")) {
    r.method = requireString(j, "method");
    if (r.method != "tableau" && r.method != "complete" && r.method != "rewrite")
      throw badRequest("unknown method '" + r.method + "' (expected tableau, complete or rewrite)");
  }
  return r;
}

json runCheck(const CheckRequest& request) {
  const auto formulas = parseAll(request.formulas);
  const std::string& kind = request.kind;

  if (kind == "sat") {
    if (formulas.empty()) throw std::invalid_argument("sat needs at least one formula");
    auto r = checkSatisfiable(formulas);
    Dnf dnf = dnfFromTableau(r.tableau);
    return {{"kind", kind},
            {"satisfiable", r.satisfiable},
            {"model", modelJson(r.model)},
            {"dnf", toString(dnf)},
            {"clauses", toJson(dnf)},
            {"openBranches", openBranchesJson(openBranches(r.tableau))},
            {"tableau", toJson(r.tableau)}};
  }
  if (kind == "valid") {
    auto r = checkValid(single(formulas, kind));
    return {{"kind", kind},
            {"valid", r.valid},
            {"counterModel", modelJson(r.counterModel)},
            {"tableau", toJson(r.tableau)}};
  }
  if (kind == "entails") {
    if (formulas.empty())
      throw std::invalid_argument("entails needs a conclusion (the last formula)");
    Goal goal = Goal::entails({formulas.begin(), formulas.end() - 1}, formulas.back());
    Tableau t = buildTableau(goal.initialFormulas());
    auto counter = extractModel(t);
    return {{"kind", kind},
            {"entails", !counter.has_value()},
            {"counterModel", modelJson(counter)},
            {"tableau", toJson(t)}};
  }
  if (kind == "dnf") {
    const Formula& f = single(formulas, kind);
    json out = {{"kind", kind}, {"method", request.method}};
    Dnf dnf;
    if (request.method == "complete") {
      dnf = completeDnf(f);
    } else if (request.method == "rewrite") {
      auto r = rewriteToDnf(f);
      dnf = r.dnf;
      json trace = json::array();
      for (const auto& s : r.trace)
        trace.push_back({{"rule", s.rule}, {"before", print(s.before)}, {"after", print(s.after)}});
      json dropped = json::array();
      for (const auto& c : r.dropped) dropped.push_back(toString(c));
      out["trace"] = trace;
      out["dropped"] = dropped;
    } else if (request.method == "tableau") {
      dnf = dnfFromTableau(buildTableau({f}));
    } else {
      throw std::invalid_argument("unknown DNF method '" + request.method + "'");
    }
    out["dnf"] = toString(dnf);
    out["clauses"] = toJson(dnf);
    return out;
  }
  if (kind == "truthtable") {
    const Formula& f = single(formulas, kind);
    json out = toJson(truthTable(f));
    out["kind"] = kind;
    out["formula"] = print(f);
    return out;
  }
  throw std::invalid_argument("unknown check kind '" + kind + "'");
}

ApiError toApiError(const std::exception& e) {
  if (auto* api = dynamic_cast<const ApiError*>(&e)) return *api;
  if (auto* pe = dynamic_cast<const ParseError*>(&e))
    return {422, "PARSE_ERROR", pe->what(),
            {{"stage", pe->stage() == ParseError::Stage::Lex ? "lex" : "parse"},
             {"position", pe->position()},
             {"token", pe->detail()},
             {"expected", pe->expected()}}};
  if (auto* se = dynamic_cast<const SessionError*>(&e)) {
    int status = 409;
    switch (se->code()) {
      case SessionError::Code::UnknownSession: status = 404; break;
      case SessionError::Code::InvalidSnapshot: status = 500; break;
      default: break;
    }
    return {status, errorCodeName(se->code()), se->what()};
  }
  if (auto* te = dynamic_cast<const TableauError*>(&e)) {
    int status = te->code() == TableauError::Code::UnfinishedTableau ? 409 : 422;
    return {status, errorCodeName(te->code()), te->what()};
  }
  if (dynamic_cast<const json::parse_error*>(&e))
    return {400, "MALFORMED_JSON", "request body is not valid JSON"};
  if (dynamic_cast<const json::exception*>(&e)) return badRequest(e.what());
  if (dynamic_cast<const CapacityError*>(&e)) return {422, "CAPACITY_EXCEEDED", e.what()};
  if (dynamic_cast<const std::invalid_argument*>(&e)) return {422, "INVALID_ARGUMENT", e.what()};
  return {500, "INTERNAL_ERROR", e.what()};
}

ApiResponse Api::createSession(const std::string& body) {
  return guarded([&] {
    json j = parseBody(body);
    if (!j.is_object()) throw badRequest("request body must be a JSON object");
    std::string mode = requireString(j, "mode");
    if (mode != "sat" && mode != "valid" && mode != "entails")
      throw badRequest("unknown mode '" + mode + "' (expected sat, valid or entails)");
    Goal goal = Goal::fromText(mode, formulaList(j));
    return ok(toJson(store_.create(std::move(goal))), 201);
  });
}

ApiResponse Api::getSession(const std::string& id) {
  return guarded([&] { return ok(toJson(store_.get(id))); });
}

ApiResponse Api::step(const std::string& id, const std::string& body) {
  return guarded([&] {
    json j = parseBody(body);
    if (!j.is_object()) throw badRequest("request body must be a JSON object");
    NodeId node = requireId(j, "nodeId");
    NodeId leaf = requireId(j, "leafId");
    try {
      auto [session, delta] = store_.step(id, node, leaf);
      return ok({{"session", toJson(session)}, {"delta", toJson(delta, session.tableau)}});
    } catch (const TableauError& e) {
      ApiError err = toApiError(e);
      throw ApiError(err.status(), err.code(), e.what(), {{"nodeId", node}, {"leafId", leaf}});
    }
  });
}

ApiResponse Api::autoFinish(const std::string& id) {
  return guarded([&] { return ok(toJson(store_.autoFinish(id))); });
}

ApiResponse Api::analysis(const std::string& id) {
  return guarded([&] {
    Session s = store_.get(id);
    json out = toJson(analyze(s));
    out["vennRegions"] = vennFor(s);
    return ok(std::move(out));
  });
}

ApiResponse Api::check(const std::string& body) {
  return guarded([&] { return ok(runCheck(checkRequestFromJson(parseBody(body)))); });
}

ApiResponse Api::handle(const std::string& method, const std::string& path,
                        const std::string& body) {
  static const std::regex sessions(R"(/api/sessions/?)");
  static const std::regex session(R"(/api/sessions/([^/]+)/?)");
  static const std::regex action(R"(/api/sessions/([^/]+)/(step|auto|analysis)/?)");
  static const std::regex checkPath(R"(/api/check/?)");

  auto notAllowed = [&] {
    ApiError e(405, "METHOD_NOT_ALLOWED", method + " is not supported on " + path);
    return ApiResponse{405, toJson(e)};
  };

  std::smatch m;
  if (std::regex_match(path, sessions))
    return method == "POST" ? createSession(body) : notAllowed();
  if (std::regex_match(path, checkPath)) return method == "POST" ? check(body) : notAllowed();
  if (std::regex_match(path, m, action)) {
    const std::string id = m[1];
    const std::string verb = m[2];
    if (verb == "analysis") return method == "GET" ? analysis(id) : notAllowed();
    if (method != "POST") return notAllowed();
    return verb == "step" ? step(id, body) : autoFinish(id);
  }
  if (std::regex_match(path, m, session)) return method == "GET" ? getSession(m[1]) : notAllowed();

  ApiError e(404, "NOT_FOUND", "no endpoint at " + path);
  return {404, toJson(e)};
}

// ---------------------------------------------------------------------------

void applyEnvironment(ServerConfig& config,
                      const std::function<const char*(const char*)>& getenv) {
  auto lookup = [&](const char* name) -> const char* {
    return getenv ? getenv(name) : std::getenv(name);
  };
  if (const char* host = lookup("TABLEAUX_HOST"); host && *host) config.host = host;
  if (const char* port = lookup("TABLEAUX_PORT"); port && *port) {
    std::size_t used = 0;
    int value = -1;
    try {
      value = std::stoi(port, &used);
    } catch (const std::exception&) {
    }
    if (used != std::string(port).size() || value < 0 || value > 65535)
      throw std::invalid_argument(std::string("TABLEAUX_PORT is not a port number: ") + port);
    config.port = value;
  }
  if (const char* origin = lookup("TABLEAUX_CORS_ORIGIN"); origin && *origin)
    config.corsOrigin = origin;
}

struct Server::Impl {
  Impl(ServerConfig c, SessionStore& store) : config(std::move(c)), api(store) {}

  ServerConfig config;
  Api api;
  httplib::Server http;
  bool bound = false;
};

namespace {

constexpr const char* kJson = "application/json";

void send(httplib::Response& res, const ApiResponse& r) {
  res.status = r.status;
  res.set_content(r.body.dump(-1, ' ', false, json::error_handler_t::replace), kJson);
}

}  // namespace

Server::Server(ServerConfig config, SessionStore& store)
    : impl_(std::make_unique<Impl>(std::move(config), store)) {
  auto& http = impl_->http;
  Api& api = impl_->api;

  auto route = [&api](const httplib::Request& req, httplib::Response& res) {
    send(res, api.handle(req.method, req.path, req.body));
  };
  const std::string pattern = R"(/api(/.*)?)";
  http.Get(pattern, route);
  http.Post(pattern, route);
  http.Put(pattern, route);
  http.Delete(pattern, route);
  http.Patch(pattern, route);
  http.Options(pattern, [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  });

  if (const auto& origin = impl_->config.corsOrigin) {
    http.set_post_routing_handler([origin = *origin](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Origin", origin);
    });
  }

  http.set_exception_handler([](const httplib::Request&, httplib::Response& res,
                                std::exception_ptr ep) {
    ApiError err(500, "INTERNAL_ERROR", "unexpected server error");
    try {
      if (ep) std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      err = toApiError(e);
    } catch (...) {
    }
    send(res, {err.status(), toJson(err)});
  });

  if (const auto& dir = impl_->config.uiDir) {
    if (!std::filesystem::is_directory(*dir))
      throw std::invalid_argument("--ui-dir is not a directory: " + dir->string());
    http.set_mount_point("/", dir->string());
  }
}

Server::~Server() { stop(); }

int Server::bind() {
  auto& c = impl_->config;
  if (c.port == 0) {
    c.port = impl_->http.bind_to_any_port(c.host);
    if (c.port < 0) throw std::runtime_error("cannot bind to " + c.host);
  } else if (!impl_->http.bind_to_port(c.host, c.port)) {
    throw std::runtime_error("cannot bind to " + c.host + ":" + std::to_string(c.port));
  }
  impl_->bound = true;
  return c.port;
}

void Server::run() {
  if (!impl_->bound) throw std::logic_error("Server::run before bind");
  impl_->http.listen_after_bind();
}

void Server::waitUntilReady() const { impl_->http.wait_until_ready(); }

void Server::stop() {
  if (impl_ && impl_->http.is_running()) impl_->http.stop();
}

}  // namespace tableaux
