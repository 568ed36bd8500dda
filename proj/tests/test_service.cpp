#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>

#include <httplib.h>

#include "tableaux/semantics.hpp"
#include "tableaux/service.hpp"

using namespace tableaux;
using nlohmann::json;

namespace {

bool isApiError(const json& body) {
  const auto& codes = documentedErrorCodes();
  return body.is_object() && body.size() == 3 && body.contains("code") && body.contains("message") &&
         body.contains("detail") && body["code"].is_string() && body["message"].is_string() &&
         std::find(codes.begin(), codes.end(), body["code"].get<std::string>()) != codes.end();
}

/// The documented session schema, checked field by field.
void checkSessionSchema(const json& s) {
  REQUIRE(s.is_object());
  CHECK(s["id"].is_string());
  CHECK(s["mode"].is_string());
  CHECK(s["formulas"].is_array());
  CHECK((s["status"] == "in-progress" || s["status"] == "finished"));
  REQUIRE(s["history"].is_array());
  for (const auto& h : s["history"]) {
    CHECK(h["nodeId"].is_number_unsigned());
    CHECK(h["leafId"].is_number_unsigned());
    CHECK(h["rule"].is_string());
    CHECK(h["timestamp"].is_number_integer());
  }
  const auto& t = s["tableau"];
  REQUIRE(t["nodes"].is_array());
  for (const auto& n : t["nodes"]) {
    CHECK(n["id"].is_number_unsigned());
    CHECK(n["formula"].is_string());
    CHECK((n["parent"].is_null() || n["parent"].is_number_unsigned()));
    CHECK(n["children"].is_array());
    CHECK((n["rule"].is_null() || (n["rule"]["source"].is_number() && n["rule"]["kind"].is_string())));
    CHECK(n["expanded"].is_boolean());
  }
  for (const auto& l : t["leaves"]) {
    CHECK(l["number"].is_number_integer());
    CHECK(l["status"].is_string());
    CHECK(l["literals"].is_array());
  }
  // Round-trips through the session decoder.
  CHECK(toJson(sessionFromJson(s)).dump() == s.dump());
}

std::string createBody(const std::string& mode, std::vector<std::string> formulas) {
  return json{{"mode", mode}, {"formulas", formulas}}.dump();
}

}  // namespace

TEST_CASE("check: sat returns the worked example") {
  SessionStore store;
  Api api(store);
  auto r = api.check(R"j({"kind":"sat","formulas":["(p|q)&(~p|r)"]})j");
  REQUIRE(r.status == 200);
  CHECK(r.body["satisfiable"] == true);
  CHECK(r.body["model"]["universe"] == json({2, 3, 4}));
  CHECK(modelFromJson(r.body["model"]) == Model({2, 3, 4}, {{"p", {2}}, {"q", {3, 4}}, {"r", {2, 4}}}));
  CHECK(r.body["dnf"] == "(p ∧ r) ∨ (¬p ∧ q) ∨ (q ∧ r)");
}

TEST_CASE("check: the other kinds") {
  SessionStore store;
  Api api(store);
  CHECK(api.check(R"j({"kind":"valid","formulas":["(p&q)->(p|q)"]})j").body["valid"] == true);
  auto inv = api.check(R"j({"kind":"valid","formulas":["p->q"]})j");
  CHECK(inv.body["valid"] == false);
  CHECK(inv.body["counterModel"]["valuation"]["p"] == json({1}));

  CHECK(api.check(R"j({"kind":"entails","formulas":["p->q","p","q"]})j").body["entails"] == true);
  CHECK(api.check(R"j({"kind":"entails","formulas":["p","q"]})j").body["entails"] == false);

  auto dnf = api.check(R"j({"kind":"dnf","formulas":["~p|q"],"method":"complete"})j");
  CHECK(dnf.body["dnf"] == "(p ∧ q) ∨ (¬p ∧ q) ∨ (¬p ∧ ¬q)");
  auto rw = api.check(R"j({"kind":"dnf","formulas":["(p|q)&(~p|r)"],"method":"rewrite"})j");
  CHECK(rw.body["trace"].size() == 3);
  CHECK(rw.body["dropped"] == json({"p ∧ ¬p"}));
  CHECK(api.check(R"j({"kind":"dnf","formulas":["(p|q)&(~p|r)"]})j").body["method"] == "tableau");

  auto tt = api.check(R"j({"kind":"truthtable","formulas":["(p|q)&(~p|r)"]})j");
  CHECK(tt.body["rows"].size() == 8);
  int trueRows = 0;
  for (const auto& row : tt.body["rows"]) trueRows += row["value"].get<int>();
  CHECK(trueRows == 4);
}

TEST_CASE("check is stateless") {
  SessionStore store;
  Api api(store);
  const std::string body = R"j({"kind":"sat","formulas":["(p|q)&(~p|r)","s->p"]})j";
  CHECK(api.check(body).body.dump() == api.check(body).body.dump());
  CHECK(store.size() == 0);
}

TEST_CASE("errors map to status codes and ApiError bodies") {
  SessionStore store;
  Api api(store);
  struct Case {
    ApiResponse response;
    int status;
    const char* code;
  };
  std::vector<Case> cases = {
      {api.check("{not json"), 400, "MALFORMED_JSON"},
      {api.check(R"j({"kind":"prove","formulas":["p"]})j"), 400, "BAD_REQUEST"},
      {api.check(R"j({"kind":"sat","formulas":"p"})j"), 400, "BAD_REQUEST"},
      {api.check(R"([1,2])"), 400, "BAD_REQUEST"},
      {api.check(R"j({"kind":"sat","formulas":["p &"]})j"), 422, "PARSE_ERROR"},
      {api.check(R"j({"kind":"valid","formulas":["p","q"]})j"), 422, "INVALID_ARGUMENT"},
      {api.check(R"j({"kind":"sat","formulas":[]})j"), 422, "INVALID_ARGUMENT"},
      {api.getSession("0123"), 404, "UNKNOWN_SESSION"},
      {api.createSession(R"j({"mode":"sat"})j"), 400, "BAD_REQUEST"},
      {api.handle("GET", "/api/nowhere", ""), 404, "NOT_FOUND"},
      {api.handle("DELETE", "/api/check", ""), 405, "METHOD_NOT_ALLOWED"},
  };
  std::string big = "a0";
  for (int i = 1; i <= 24; ++i) big += "|a" + std::to_string(i);
  cases.push_back({api.check(json{{"kind", "truthtable"}, {"formulas", {big}}}.dump()), 422,
                   "CAPACITY_EXCEEDED"});

  for (const auto& c : cases) {
    INFO(c.response.body.dump());
    CHECK(c.response.status == c.status);
    CHECK(c.response.body["code"] == c.code);
    CHECK(isApiError(c.response.body));
  }

  auto parseError = api.check(R"j({"kind":"sat","formulas":["p &"]})j");
  CHECK(parseError.body["detail"]["position"] == 4);
  CHECK(parseError.body["detail"]["stage"] == "parse");
}

TEST_CASE("session lifecycle through the API") {
  SessionStore store;
  Api api(store);
  auto created = api.handle("POST", "/api/sessions", createBody("sat", {"(p|q)&(~p|r)"}));
  REQUIRE(created.status == 201);
  checkSessionSchema(created.body);
  const std::string id = created.body["id"];
  const std::string base = "/api/sessions/" + id;

  CHECK(api.handle("GET", base, "").body == created.body);
  CHECK(api.handle("GET", base + "/analysis", "").status == 409);
  CHECK(api.handle("GET", base + "/analysis", "").body["code"] == "SESSION_NOT_FINISHED");

  auto stepped = api.handle("POST", base + "/step", R"j({"nodeId":0,"leafId":0})j");
  REQUIRE(stepped.status == 200);
  checkSessionSchema(stepped.body["session"]);
  CHECK(stepped.body["delta"]["rule"] == "alpha:and");
  CHECK(stepped.body["delta"]["added"].size() == 2);

  auto literal = api.handle("POST", base + "/step", R"j({"nodeId":0,"leafId":2})j");
  CHECK(literal.status == 422);
  CHECK(literal.body["code"] == "ALREADY_EXPANDED");
  CHECK(literal.body["detail"] == json({{"nodeId", 0}, {"leafId", 2}}));

  auto beta = api.handle("POST", base + "/step", R"j({"nodeId":1,"leafId":2})j");
  REQUIRE(beta.status == 200);
  auto onLiteral = api.handle("POST", base + "/step", R"j({"nodeId":3,"leafId":3})j");
  CHECK(onLiteral.status == 422);
  CHECK(onLiteral.body["code"] == "NOT_APPLICABLE");
  CHECK(isApiError(onLiteral.body));

  CHECK(api.handle("POST", base + "/step", R"j({"nodeId":-1,"leafId":3})j").status == 400);
  CHECK(api.handle("POST", base + "/step", R"j({"nodeId":1})j").status == 400);

  auto finished = api.handle("POST", base + "/auto", "");
  REQUIRE(finished.status == 200);
  checkSessionSchema(finished.body);
  CHECK(finished.body["status"] == "finished");

  auto late = api.handle("POST", base + "/step", R"j({"nodeId":2,"leafId":3})j");
  CHECK(late.status == 409);
  CHECK(late.body["code"] == "SESSION_FINISHED");

  auto analysis = api.handle("GET", base + "/analysis", "");
  REQUIRE(analysis.status == 200);
  CHECK(analysis.body["verdict"] == "satisfiable");
  CHECK(analysis.body["model"]["universe"] == json({2, 3, 4}));
  CHECK(analysis.body["dnf"] == "(p ∧ r) ∨ (¬p ∧ q) ∨ (q ∧ r)");
  CHECK(analysis.body["vennRegions"]["atoms"] == json({"p", "q", "r"}));
  CHECK(analysis.body["vennRegions"]["regions"].size() == 8);
}

TEST_CASE("analysis omits Venn data above three atoms") {
  SessionStore store;
  Api api(store);
  auto created = api.createSession(createBody("valid", {"(p&q)->(r|s|p)"}));
  const std::string id = created.body["id"];
  api.autoFinish(id);
  auto a = api.analysis(id);
  CHECK(a.body["verdict"] == "valid");
  CHECK(a.body["vennRegions"].is_null());
}

TEST_CASE("environment overrides") {
  ServerConfig c;
  applyEnvironment(c, [](const char* name) -> const char* {
    std::string n = name;
    if (n == "TABLEAUX_HOST") return "0.0.0.0";
    if (n == "TABLEAUX_PORT") return "8123";
    return nullptr;
  });
  CHECK(c.host == "0.0.0.0");
  CHECK(c.port == 8123);
  CHECK_FALSE(c.corsOrigin);

  ServerConfig d;
  applyEnvironment(d, [](const char*) -> const char* { return nullptr; });
  CHECK(d.host == "127.0.0.1");
  CHECK(d.port == 7070);

  ServerConfig bad;
  CHECK_THROWS_AS(applyEnvironment(bad, [](const char* name) -> const char* {
                    return std::string(name) == "TABLEAUX_PORT" ? "http" : nullptr;
                  }),
                  std::invalid_argument);
}

TEST_CASE("live HTTP server") {
  auto uiDir = std::filesystem::temp_directory_path() / ("tableaux-ui-" + newSessionId());
  std::filesystem::create_directories(uiDir);
  {
    std::ofstream(uiDir / "index.html") << "<!doctype html><title>ui</title>";
  }

  SessionStore store;
  ServerConfig config;
  config.port = 0;
  config.uiDir = uiDir;
  config.corsOrigin = "http://localhost:5173";
  Server server(config, store);
  const int port = server.bind();
  std::thread runner([&] { server.run(); });
  server.waitUntilReady();

  httplib::Client client("127.0.0.1", port);

  auto check = client.Post("/api/check", R"j({"kind":"valid","formulas":["(p&q)->(p|q)"]})j",
                           "application/json");
  REQUIRE(check);
  CHECK(check->status == 200);
  CHECK(check->get_header_value("Content-Type").rfind("application/json", 0) == 0);
  CHECK(check->get_header_value("Access-Control-Allow-Origin") == "http://localhost:5173");
  CHECK(json::parse(check->body)["valid"] == true);

  auto created = client.Post("/api/sessions", createBody("sat", {"(p|q)&(~p|r)"}), "application/json");
  REQUIRE(created);
  CHECK(created->status == 201);
  const std::string id = json::parse(created->body)["id"];

  auto onLiteral = client.Post(("/api/sessions/" + id + "/step").c_str(),
                               R"j({"nodeId":0,"leafId":0})j", "application/json");
  REQUIRE(onLiteral);
  CHECK(onLiteral->status == 200);

  auto finished = client.Post(("/api/sessions/" + id + "/auto").c_str(), "", "application/json");
  REQUIRE(finished);
  CHECK(finished->status == 200);
  auto analysis = client.Get(("/api/sessions/" + id + "/analysis").c_str());
  REQUIRE(analysis);
  CHECK(json::parse(analysis->body)["model"]["universe"] == json({2, 3, 4}));

  auto missing = client.Get("/api/sessions/ffffffffffffffffffffffffffffffff");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  CHECK(isApiError(json::parse(missing->body)));

  auto malformed = client.Post("/api/check", "{", "application/json");
  REQUIRE(malformed);
  CHECK(malformed->status == 400);

  auto preflight = client.Options("/api/check");
  REQUIRE(preflight);
  CHECK(preflight->status == 204);
  CHECK(preflight->get_header_value("Access-Control-Allow-Origin") == "http://localhost:5173");

  auto page = client.Get("/index.html");
  REQUIRE(page);
  CHECK(page->status == 200);
  CHECK(page->body.find("<title>ui</title>") != std::string::npos);

  server.stop();
  runner.join();
  std::filesystem::remove_all(uiDir);
}

TEST_CASE("concurrent HTTP clients") {
  SessionStore store;
  ServerConfig config;
  config.port = 0;
  Server server(config, store);
  const int port = server.bind();
  std::thread runner([&] { server.run(); });
  server.waitUntilReady();

  std::atomic<int> ok{0};
  std::vector<std::thread> clients;
  for (int t = 0; t < 6; ++t)
    clients.emplace_back([&] {
      httplib::Client client("127.0.0.1", port);
      for (int k = 0; k < 10; ++k) {
        auto created = client.Post("/api/sessions", createBody("sat", {"(p|q)&(~p|r)"}), "application/json");
        if (!created || created->status != 201) continue;
        const std::string id = json::parse(created->body)["id"];
        auto done = client.Post(("/api/sessions/" + id + "/auto").c_str(), "", "application/json");
        if (done && done->status == 200) ++ok;
      }
    });
  for (auto& c : clients) c.join();
  CHECK(ok == 60);
  CHECK(store.size() == 60);

  server.stop();
  runner.join();
}
