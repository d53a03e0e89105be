#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "logon/checker.hpp"
#include "logon/index.hpp"
#include "logon/proof.hpp"
#include "logon/serialize.hpp"

namespace logon {

namespace fs = std::filesystem;

inline constexpr std::string_view kCacheFormat = "logon-cache/1";

/// Read from `<root>/project.toml`:
///   source  = "source"     sources; the root itself if absent
///   cache   = ".cache"     overridden by $LOGON_CACHE
///   html    = "html"       static pages, relative to the cache dir
///   include = ["*.mmt"]    globs over paths relative to the source dir
struct ProjectConfig {
  fs::path root;
  fs::path sourceDir;
  fs::path cacheDir;
  fs::path htmlDir;
  std::vector<std::string> include{"*.mmt"};

  static ProjectConfig load(const fs::path& root);
};

class ProjectError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Source files of the project sorted by relative path.
std::vector<SourceFile> collectSources(const ProjectConfig& config);

struct FileReport {
  std::string file;
  bool skipped = false;
  std::size_t errors = 0;
  std::size_t warnings = 0;
  double millis = 0;
};

struct BuildReport {
  std::vector<FileReport> files;  // in build order
  std::size_t errors = 0;
  std::size_t built = 0;
  std::size_t skipped = 0;
  double millis = 0;
  std::vector<Diagnostic> diagnostics;

  Json toJson() const;
};

struct BuildOptions {
  bool force = false;  // ignore the cache
  bool html = true;
  bool writeCache = true;
};

/// A built project: the checked state plus its indexes.
struct Project {
  ProjectConfig config;
  std::vector<SourceFile> files;
  std::vector<std::string> order;  // files, includes first
  ProjectCheck check;
  RelationalIndex relations;
  TermIndex terms;
  BuildReport report;

  /// Notation table over all theories, for queries.
  NotationTable queryTable() const;
};

/// Checks every file (reusing cache entries whose inputs are unchanged),
/// writes cache entries, manifest, merged index and HTML.
Project buildProject(const ProjectConfig& config, const BuildOptions& options = {});

/// Files ordered so that included theories come first; back edges of
/// include cycles are ignored.
std::vector<std::string> fileOrder(const std::vector<Document>& docs);

/// Cache entry of one file: content hashes, document, parse and solve
/// results per slot, index shards and diagnostics.
Json cacheEntry(const Project& p, const std::string& file, const std::string& contentHash,
                const std::string& inputsHash);
/// The merged relational and term index.
Json indexJson(const RelationalIndex& relations, const TermIndex& terms);

/// Writes via a temporary file and rename.
void writeAtomic(const fs::path& path, const std::string& content);
/// Stable serialization used for every cache file.
std::string dumpStable(const Json& j);

/// One HTML page per source file plus index.html.
void renderHtml(const Project& p);
std::string htmlPage(const Project& p, const std::string& file);
std::string htmlIndex(const Project& p);

}  // namespace logon
