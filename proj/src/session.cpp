#include "tableaux/session.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <random>

namespace tableaux {

Goal Goal::sat(std::vector<Formula> gamma) {
  if (gamma.empty()) throw std::invalid_argument("satisfiability needs at least one formula");
  return Goal{GoalKind::Sat, std::move(gamma), std::nullopt};
}

Goal Goal::valid(Formula f) { return Goal{GoalKind::Valid, {}, std::move(f)}; }

Goal Goal::entails(std::vector<Formula> premises, Formula conclusion) {
  return Goal{GoalKind::Entails, std::move(premises), std::move(conclusion)};
}

Goal Goal::fromText(const std::string& mode, const std::vector<std::string>& formulas) {
  std::vector<Formula> parsed;
  for (const auto& text : formulas) parsed.push_back(parse(text));
  if (mode == "sat") return sat(std::move(parsed));
  if (mode == "valid") {
    if (parsed.size() != 1) throw std::invalid_argument("validity takes exactly one formula");
    return valid(parsed[0]);
  }
  if (mode == "entails") {
    if (parsed.empty())
      throw std::invalid_argument("entailment needs a conclusion (the last formula)");
    Formula conclusion = parsed.back();
    parsed.pop_back();
    return entails(std::move(parsed), std::move(conclusion));
  }
  throw std::invalid_argument("unknown mode '" + mode + "' (expected sat, valid or entails)");
}

std::vector<Formula> Goal::initialFormulas() const {
  std::vector<Formula> out = premises;
  if (conclusion) out.push_back(Formula::negation(*conclusion));
  return out;
}

std::vector<Formula> Goal::formulas() const {
  std::vector<Formula> out = premises;
  if (conclusion) out.push_back(*conclusion);
  return out;
}

std::string toString(GoalKind kind) {
  switch (kind) {
    case GoalKind::Sat: return "sat";
    case GoalKind::Valid: return "valid";
    case GoalKind::Entails: return "entails";
  }
  return "?";
}

std::string toString(Verdict v) {
  switch (v) {
    case Verdict::Satisfiable: return "satisfiable";
    case Verdict::Unsatisfiable: return "unsatisfiable";
    case Verdict::Valid: return "valid";
    case Verdict::NotValid: return "not-valid";
    case Verdict::Entails: return "entails";
    case Verdict::DoesNotEntail: return "does-not-entail";
  }
  return "?";
}

std::string errorCodeName(SessionError::Code code) {
  switch (code) {
    case SessionError::Code::UnknownSession: return "UNKNOWN_SESSION";
    case SessionError::Code::SessionFinished: return "SESSION_FINISHED";
    case SessionError::Code::SessionNotFinished: return "SESSION_NOT_FINISHED";
    case SessionError::Code::InvalidSnapshot: return "INVALID_SNAPSHOT";
  }
  return "?";
}

std::string newSessionId() {
  thread_local std::mt19937_64 engine{[] {
    std::random_device rd;
    std::seed_seq seq{rd(), rd(), rd(), rd(), rd(), rd(), rd(), rd()};
    return std::mt19937_64(seq);
  }()};
  static constexpr char hex[] = "0123456789abcdef";
  std::string id;
  for (int word = 0; word < 2; ++word) {
    std::uint64_t bits = engine();
    for (int i = 0; i < 16; ++i, bits >>= 4) id += hex[bits & 0xF];
  }
  return id;
}

namespace {

std::int64_t nowMillis() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

SessionStatus statusOf(const Tableau& t) {
  return t.finished() ? SessionStatus::Finished : SessionStatus::InProgress;
}

bool validSessionId(const std::string& id) {
  return id.size() == 32 && std::all_of(id.begin(), id.end(), [](char c) {
           return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
         });
}

}  // namespace

Session createSession(Goal goal) { return createSession(std::move(goal), newSessionId()); }

Session createSession(Goal goal, std::string id) {
  Tableau t(goal.initialFormulas());
  SessionStatus status = statusOf(t);
  return Session{std::move(id), std::move(goal), std::move(t), {}, status};
}

std::pair<Session, Delta> step(Session s, NodeId node, NodeId leaf) {
  if (s.status == SessionStatus::Finished)
    throw SessionError(SessionError::Code::SessionFinished,
                       "This tableau is finished: every branch is open or closed, so no rule can "
                       "be applied any more. Ask for the analysis instead.");
  auto added = s.tableau.expand(node, leaf);
  RuleKind rule = s.tableau.node(added.front()).producedBy->rule;
  s.history.push_back({node, leaf, rule, nowMillis()});
  s.status = statusOf(s.tableau);
  Delta delta{{node, leaf}, rule, std::move(added)};
  return {std::move(s), std::move(delta)};
}

Session autoFinish(Session s) {
  const std::int64_t now = nowMillis();
  s.tableau.expandAll([&](const Step& st, RuleKind rule) {
    s.history.push_back({st.node, st.leaf, rule, now});
  });
  s.status = SessionStatus::Finished;
  return s;
}

Analysis analyze(const Session& s) {
  if (s.status != SessionStatus::Finished)
    throw SessionError(SessionError::Code::SessionNotFinished,
                       "The tableau still has unfinished branches. Keep applying rules (or "
                       "auto-finish) before asking for the analysis.");
  Analysis a;
  a.openBranches = openBranches(s.tableau);
  a.model = extractModel(s.tableau);
  a.dnf = dnfFromTableau(s.tableau);
  const bool open = !a.openBranches.empty();
  switch (s.goal.kind) {
    case GoalKind::Sat: a.verdict = open ? Verdict::Satisfiable : Verdict::Unsatisfiable; break;
    case GoalKind::Valid: a.verdict = open ? Verdict::NotValid : Verdict::Valid; break;
    case GoalKind::Entails: a.verdict = open ? Verdict::DoesNotEntail : Verdict::Entails; break;
  }
  return a;
}

Session replay(std::string id, Goal goal, const std::vector<HistoryEntry>& history) {
  Session s = createSession(std::move(goal), std::move(id));
  for (const auto& h : history) {
    auto added = s.tableau.expand(h.node, h.leaf);
    if (s.tableau.node(added.front()).producedBy->rule != h.rule)
      throw SessionError(SessionError::Code::InvalidSnapshot,
                         "history entry for node " + std::to_string(h.node) + " names rule " +
                             ruleName(h.rule) + " but the formula there takes a different rule");
    s.history.push_back(h);
  }
  s.status = statusOf(s.tableau);
  return s;
}

// ---------------------------------------------------------------------------

nlohmann::json toJson(const Session& s) {
  nlohmann::json formulas = nlohmann::json::array();
  for (const auto& f : s.goal.formulas()) formulas.push_back(print(f));
  nlohmann::json history = nlohmann::json::array();
  for (const auto& h : s.history)
    history.push_back({{"nodeId", h.node},
                       {"leafId", h.leaf},
                       {"rule", ruleName(h.rule)},
                       {"timestamp", h.timestamp}});
  return {{"id", s.id},
          {"mode", toString(s.goal.kind)},
          {"formulas", formulas},
          {"status", s.status == SessionStatus::Finished ? "finished" : "in-progress"},
          {"history", history},
          {"tableau", toJson(s.tableau)}};
}

Session sessionFromJson(const nlohmann::json& j) {
  try {
    auto goal = Goal::fromText(j.at("mode").get<std::string>(),
                               j.at("formulas").get<std::vector<std::string>>());
    std::vector<HistoryEntry> history;
    for (const auto& h : j.at("history"))
      history.push_back({h.at("nodeId").get<NodeId>(), h.at("leafId").get<NodeId>(),
                         ruleFromName(h.at("rule").get<std::string>()),
                         h.at("timestamp").get<std::int64_t>()});
    Session s = replay(j.at("id").get<std::string>(), std::move(goal), history);
    if (j.contains("tableau") && j.at("tableau") != toJson(s.tableau))
      throw SessionError(SessionError::Code::InvalidSnapshot,
                         "replaying the history does not reproduce the stored tableau");
    return s;
  } catch (const SessionError&) {
    throw;
  } catch (const std::exception& e) {
    throw SessionError(SessionError::Code::InvalidSnapshot,
                       std::string("invalid session snapshot: ") + e.what());
  }
}

nlohmann::json toJson(const Delta& d, const Tableau& t) {
  nlohmann::json added = nlohmann::json::array();
  for (NodeId id : d.added) added.push_back(toJson(t.node(id), t));
  return {{"nodeId", d.step.node}, {"leafId", d.step.leaf}, {"rule", ruleName(d.rule)},
          {"added", added}};
}

nlohmann::json toJson(const Analysis& a) {
  nlohmann::json branches = nlohmann::json::array();
  for (const auto& b : a.openBranches) {
    std::vector<std::string> lits;
    for (const auto& lit : b.literals) lits.push_back(toString(lit));
    branches.push_back({{"number", b.number}, {"literals", lits}});
  }
  return {{"verdict", toString(a.verdict)},
          {"openBranches", branches},
          {"model", a.model ? toJson(*a.model) : nlohmann::json(nullptr)},
          {"dnf", toString(a.dnf)},
          {"clauses", toJson(a.dnf)}};
}

// ---------------------------------------------------------------------------

SessionStore::SessionStore(std::optional<std::filesystem::path> snapshotDir)
    : snapshotDir_(std::move(snapshotDir)) {
  if (snapshotDir_) std::filesystem::create_directories(*snapshotDir_);
}

void SessionStore::persist(const Session& s) const {
  if (!snapshotDir_) return;
  auto target = *snapshotDir_ / (s.id + ".json");
  auto tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    out << toJson(s).dump(2) << '\n';
  }
  std::filesystem::rename(tmp, target);
}

std::shared_ptr<SessionStore::Entry> SessionStore::find(const std::string& id) {
  std::lock_guard lock(mutex_);
  if (auto it = sessions_.find(id); it != sessions_.end()) return it->second;
  if (snapshotDir_ && validSessionId(id)) {
    std::ifstream in(*snapshotDir_ / (id + ".json"));
    if (in) {
      auto entry = std::make_shared<Entry>(sessionFromJson(nlohmann::json::parse(in)));
      sessions_.emplace(id, entry);
      return entry;
    }
  }
  throw SessionError(SessionError::Code::UnknownSession, "no session with id '" + id + "'");
}

Session SessionStore::create(Goal goal) {
  auto entry = std::make_shared<Entry>(createSession(std::move(goal)));
  Session copy = entry->session;
  {
    std::lock_guard lock(mutex_);
    sessions_.emplace(copy.id, entry);
  }
  persist(copy);
  return copy;
}

Session SessionStore::get(const std::string& id) {
  auto entry = find(id);
  std::lock_guard lock(entry->mutex);
  return entry->session;
}

std::pair<Session, Delta> SessionStore::step(const std::string& id, NodeId node, NodeId leaf) {
  auto entry = find(id);
  std::lock_guard lock(entry->mutex);
  auto result = tableaux::step(entry->session, node, leaf);
  entry->session = result.first;
  persist(entry->session);
  return result;
}

Session SessionStore::autoFinish(const std::string& id) {
  auto entry = find(id);
  std::lock_guard lock(entry->mutex);
  if (entry->session.status == SessionStatus::InProgress) {
    entry->session = tableaux::autoFinish(entry->session);
    persist(entry->session);
  }
  return entry->session;
}

Analysis SessionStore::analyze(const std::string& id) {
  auto entry = find(id);
  std::lock_guard lock(entry->mutex);
  return tableaux::analyze(entry->session);
}

std::size_t SessionStore::size() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

}  // namespace tableaux
