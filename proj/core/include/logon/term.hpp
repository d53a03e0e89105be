#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace logon {

/// A byte range [start, end) in a source file.
struct SourceRef {
  std::string file;
  std::size_t start = 0;
  std::size_t end = 0;

  bool contains(const SourceRef& other) const {
    return file == other.file && start <= other.start && other.end <= end;
  }
  std::size_t length() const { return end - start; }
  bool operator==(const SourceRef&) const = default;
};

/// Line/column (both 1-based) of a byte offset.
struct LineColumn {
  std::size_t line = 1;
  std::size_t column = 1;
};
LineColumn lineColumnOf(std::string_view text, std::size_t offset);

class Term;
using TermPtr = std::shared_ptr<const Term>;

struct VarDecl {
  std::string name;
  TermPtr type;       // may be null
  TermPtr definiens;  // may be null
};

/// Ordered variable declarations; names are pairwise distinct.
using Context = std::vector<VarDecl>;

enum class TermKind { Constant, Variable, Complex };

/// Immutable term node. Constants carry a qualified name `theory?name`,
/// variables a local name, complex terms a head plus bound context and
/// arguments. Meta-variables are variables whose name starts with '/'.
class Term {
 public:
  static TermPtr constant(std::string path, std::optional<SourceRef> ref = {},
                          bool inferred = false);
  static TermPtr variable(std::string name, std::optional<SourceRef> ref = {},
                          bool inferred = false);
  static TermPtr complex(std::string head, Context bound, std::vector<TermPtr> args,
                         std::optional<SourceRef> ref = {}, bool inferred = false);

  TermKind kind() const { return kind_; }
  bool isConstant() const { return kind_ == TermKind::Constant; }
  bool isVariable() const { return kind_ == TermKind::Variable; }
  bool isComplex() const { return kind_ == TermKind::Complex; }

  /// Constant path, variable name, or complex head.
  const std::string& name() const { return name_; }
  const Context& bound() const { return bound_; }
  const std::vector<TermPtr>& args() const { return args_; }
  const std::optional<SourceRef>& ref() const { return ref_; }
  bool inferred() const { return inferred_; }

  bool isMeta() const { return kind_ == TermKind::Variable && isMetaName(name_); }
  bool hasHead(std::string_view head) const {
    return kind_ == TermKind::Complex && name_ == head;
  }

  TermPtr withRef(std::optional<SourceRef> ref) const;
  TermPtr withInferred(bool inferred) const;
  TermPtr withChildren(Context bound, std::vector<TermPtr> args) const;

  static bool isMetaName(std::string_view name) { return !name.empty() && name.front() == '/'; }

 private:
  Term() = default;
  TermKind kind_ = TermKind::Constant;
  std::string name_;
  Context bound_;
  std::vector<TermPtr> args_;
  std::optional<SourceRef> ref_;
  bool inferred_ = false;
};

/// Child positions of a complex term: for every bound entry its type then
/// its definiens (when present), followed by the arguments.
std::vector<TermPtr> children(const Term& t);
TermPtr childAt(const TermPtr& t, const std::vector<std::size_t>& path);
TermPtr replaceAt(const TermPtr& t, const std::vector<std::size_t>& path, const TermPtr& with);

/// Structural identity ignoring source references and inferred-flags.
/// Bound-variable names compare literally.
bool equalsStructural(const Term& a, const Term& b);
bool equalsStructural(const TermPtr& a, const TermPtr& b);
bool equalsStructural(const Context& a, const Context& b);

/// Equality modulo renaming of bound variables (also ignores refs/flags).
bool alphaEquivalent(const TermPtr& a, const TermPtr& b);

std::set<std::string> freeVariables(const TermPtr& t);
bool occursFree(const TermPtr& t, std::string_view name);
std::size_t termSize(const TermPtr& t);

using Substitution = std::map<std::string, TermPtr>;

/// Simultaneous capture-avoiding substitution. Unchanged subterms are
/// returned pointer-identical. A binder that would capture a free variable
/// of a substituted value is renamed by appending a numeric suffix.
TermPtr substitute(const TermPtr& t, const Substitution& sigma);

/// A name based on `base` (base, base1, base2, ...) that is not in `avoid`.
std::string freshName(const std::string& base, const std::set<std::string>& avoid);

struct SubtermMatch {
  TermPtr term;
  std::vector<std::size_t> path;
};

/// Deepest non-inferred subterm whose source reference contains `region`.
std::optional<SubtermMatch> subtermAt(const TermPtr& t, const SourceRef& region);

/// Returns a copy with every node's inferred-flag set and, when given,
/// every source reference replaced by `ref`.
TermPtr markInferred(const TermPtr& t, const std::optional<SourceRef>& ref = std::nullopt);
TermPtr stripRefs(const TermPtr& t);
/// Shifts all source references by `delta` bytes.
TermPtr shiftRefs(const TermPtr& t, std::ptrdiff_t delta);
/// Replaces every source reference by `f(ref)`.
TermPtr mapRefs(const TermPtr& t, const std::function<SourceRef(const SourceRef&)>& f);

/// True iff every variable occurrence is bound by an enclosing binder or
/// listed in `ambient` (ambient includes meta-variables).
bool isWellScoped(const TermPtr& t, const std::set<std::string>& ambient);

/// Visits every subterm (pre-order) with its path.
template <class F>
void forEachSubterm(const TermPtr& t, F&& f, std::vector<std::size_t>& path) {
  f(t, path);
  auto kids = children(*t);
  for (std::size_t i = 0; i < kids.size(); ++i) {
    path.push_back(i);
    forEachSubterm(kids[i], f, path);
    path.pop_back();
  }
}

template <class F>
void forEachSubterm(const TermPtr& t, F&& f) {
  std::vector<std::size_t> path;
  forEachSubterm(t, f, path);
}

}  // namespace logon

namespace logon {

/// Notation-free form used in tests and logs: constants print their path,
/// variables `$x`, complex terms `C[head; x:A, y; args]`.
std::string debugString(const TermPtr& t);

}  // namespace logon
