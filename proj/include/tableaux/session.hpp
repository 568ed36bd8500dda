// Step-wise tableau sessions for teaching. The student chooses every rule
// application; the engine validates it, explains illegal moves, and analyses
// the finished tableau.

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tableaux/dnf.hpp"
#include "tableaux/formula.hpp"
#include "tableaux/semantics.hpp"
#include "tableaux/tableau.hpp"

namespace tableaux {

enum class GoalKind { Sat, Valid, Entails };

/// What the session decides. The tableau starts from Γ (sat), {¬f} (valid)
/// or Γ ∪ {¬f} (entails).
struct Goal {
  GoalKind kind = GoalKind::Sat;
  std::vector<Formula> premises;
  std::optional<Formula> conclusion;

  static Goal sat(std::vector<Formula> gamma);
  static Goal valid(Formula f);
  static Goal entails(std::vector<Formula> premises, Formula conclusion);
  /// `mode` is "sat", "valid" or "entails"; for entails the last formula is
  /// the conclusion. Throws ParseError or std::invalid_argument.
  static Goal fromText(const std::string& mode, const std::vector<std::string>& formulas);

  std::vector<Formula> initialFormulas() const;
  /// Formulas as entered, conclusion last.
  std::vector<Formula> formulas() const;
};

std::string toString(GoalKind kind);

struct HistoryEntry {
  NodeId node;
  NodeId leaf;
  RuleKind rule;
  std::int64_t timestamp;  // ms since the Unix epoch
};

enum class SessionStatus { InProgress, Finished };

struct Session {
  std::string id;
  Goal goal;
  Tableau tableau;
  std::vector<HistoryEntry> history;
  SessionStatus status = SessionStatus::InProgress;
};

struct Delta {
  Step step;
  RuleKind rule;
  std::vector<NodeId> added;
};

enum class Verdict { Satisfiable, Unsatisfiable, Valid, NotValid, Entails, DoesNotEntail };
std::string toString(Verdict v);

struct Analysis {
  Verdict verdict;
  std::vector<OpenBranch> openBranches;
  std::optional<Model> model;
  Dnf dnf;
};

class SessionError : public std::runtime_error {
 public:
  enum class Code { UnknownSession, SessionFinished, SessionNotFinished, InvalidSnapshot };
  SessionError(Code code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}
  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

std::string errorCodeName(SessionError::Code code);

/// 128 random bits as 32 lowercase hex digits.
std::string newSessionId();

Session createSession(Goal goal);
Session createSession(Goal goal, std::string id);

/// Throws SessionError::SessionFinished or the TableauError of the move.
std::pair<Session, Delta> step(Session s, NodeId node, NodeId leaf);
/// Finishes with the automatic strategy, recording each move in the history.
Session autoFinish(Session s);
/// Throws SessionError::SessionNotFinished.
Analysis analyze(const Session& s);

/// Rebuilds a session by applying `history` to the initial tableau.
Session replay(std::string id, Goal goal, const std::vector<HistoryEntry>& history);

nlohmann::json toJson(const Session& s);
/// Replays the recorded history and checks it against the stored tableau.
Session sessionFromJson(const nlohmann::json& j);
nlohmann::json toJson(const Delta& d, const Tableau& t);
nlohmann::json toJson(const Analysis& a);

/// Shared in-memory session store. Operations on one session are serialized;
/// distinct sessions proceed independently. With a snapshot directory every
/// change is written to `<dir>/<id>.json` and unknown ids are looked up there.
class SessionStore {
 public:
  explicit SessionStore(std::optional<std::filesystem::path> snapshotDir = std::nullopt);

  Session create(Goal goal);
  Session get(const std::string& id);
  std::pair<Session, Delta> step(const std::string& id, NodeId node, NodeId leaf);
  Session autoFinish(const std::string& id);
  Analysis analyze(const std::string& id);
  std::size_t size() const;

 private:
  struct Entry {
    explicit Entry(Session s) : session(std::move(s)) {}
    std::mutex mutex;
    Session session;
  };

  std::shared_ptr<Entry> find(const std::string& id);
  void persist(const Session& s) const;

  mutable std::mutex mutex_;
  std::unordered_map<std::string, std::shared_ptr<Entry>> sessions_;
  std::optional<std::filesystem::path> snapshotDir_;
};

}  // namespace tableaux
