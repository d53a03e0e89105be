#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "logon/change_manager.hpp"
#include "logon/project.hpp"

namespace logon {

inline constexpr int kProtocolVersion = 1;

/// Error codes of the protocol.
namespace errc {
inline constexpr const char* kParseError = "ParseError";
inline constexpr const char* kInvalidRequest = "InvalidRequest";
inline constexpr const char* kMethodNotFound = "MethodNotFound";
inline constexpr const char* kInvalidParams = "InvalidParams";
inline constexpr const char* kNotInitialized = "NotInitialized";
inline constexpr const char* kProtocolVersionMismatch = "ProtocolVersionMismatch";
inline constexpr const char* kStaleVersion = "StaleVersion";
inline constexpr const char* kNotFound = "NotFound";
inline constexpr const char* kQueryParseError = "QueryParseError";
inline constexpr const char* kUnknownRelation = "UnknownRelation";
inline constexpr const char* kCancelled = "Cancelled";
}  // namespace errc

class ProtocolError : public std::runtime_error {
 public:
  ProtocolError(std::string code, const std::string& message) : std::runtime_error(message), code(std::move(code)) {}
  std::string code;
};

/// One open document: its text and the dependency graph checking it
/// together with the project files.
struct DocumentState {
  std::string uri;
  long version = 0;
  std::string text;
  std::shared_ptr<const DepGraph> graph;
  CheckStats stats;  // of the edit that produced this state
};

/// Editor session. Requests are JSON objects `{"id", "method", "params"}`;
/// responses `{"id", "result"}` or `{"id", "error": {"code", "message"}}`.
/// Snapshots are immutable, so read-only requests never wait for a
/// running validation; a newer didChange for the same uri makes an older
/// one's result be discarded.
class Session {
 public:
  /// Without a root the session only knows the documents opened in it.
  explicit Session(std::optional<fs::path> projectRoot = std::nullopt);

  Json handle(const Json& request);
  /// Dispatches one method; throws ProtocolError.
  Json call(const std::string& method, const Json& params);

  static const std::vector<std::string>& methods();

  /// Server-to-client notifications queued since the last call.
  std::vector<Json> drainNotifications();

  /// Observes didChange between its check and its commit (tests use it
  /// to interleave edits).
  std::function<void(const std::string& uri)> beforeCommit;

  const Project* project() const { return project_ ? &*project_ : nullptr; }

 private:
  std::shared_ptr<const DocumentState> doc(const std::string& uri) const;
  std::vector<SourceFile> filesWith(const std::string& uri, const std::string& text) const;

  Json initialize(const Json& p);
  Json didOpen(const Json& p);
  Json didChange(const Json& p);
  Json didClose(const Json& p);
  Json typeAt(const Json& p);
  Json completionsAt(const Json& p);
  Json definitionAt(const Json& p);
  Json related(const Json& p);
  Json search(const Json& p);
  Json astOf(const Json& p);
  Json subtermAt(const Json& p);
  Json stats(const Json& p);

  std::optional<Project> project_;
  mutable std::mutex mutex_;
  bool initialized_ = false;
  std::map<std::string, std::shared_ptr<const DocumentState>> docs_;
  std::map<std::string, long> lastVersion_;
  std::map<std::string, std::uint64_t> generation_;
  std::vector<Json> notifications_;
  std::uint64_t requests_ = 0;
};

/// Newline-delimited JSON over the given streams until EOF.
void serveStdio(Session& session, std::istream& in, std::ostream& out);

}  // namespace logon
