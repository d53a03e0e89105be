#include <algorithm>
#include <functional>
#include <set>

#include "logon/term_parser.hpp"

namespace logon {

namespace {

bool isWordChar(unsigned char c) { return std::isalnum(c) || c == '_' || c == '\''; }

bool isWordLike(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return isWordChar(c); });
}

}  // namespace

void NotationTable::add(TableEntry entry) {
  if (byPath_.count(entry.path)) return;
  std::size_t idx = entries_.size();
  byPath_[entry.path] = idx;
  byName_[entry.name].push_back(idx);
  if (entry.notation) {
    const auto& ms = entry.notation->markers;
    if (entry.notation->isJuxtaposition() && !apply_) apply_ = idx;
    if (!ms.empty() && ms[0].isDelim()) prefix_[ms[0].text].push_back(idx);
    if (ms.size() >= 2 && !ms[0].isDelim() && ms[1].isDelim()) infix_[ms[1].text].push_back(idx);
    for (const auto& m : ms) {
      if (!m.isDelim()) continue;
      if (delimiters_.insert(m.text).second && !isWordLike(m.text)) symbolic_.push_back(m.text);
    }
    // longest first for maximal munch
    std::sort(symbolic_.begin(), symbolic_.end(),
              [](const std::string& a, const std::string& b) {
                return a.size() != b.size() ? a.size() > b.size() : a < b;
              });
  }
  entries_.push_back(std::move(entry));
}

const TableEntry* NotationTable::find(std::string_view path) const {
  auto it = byPath_.find(path);
  return it == byPath_.end() ? nullptr : &entries_[it->second];
}

std::vector<const TableEntry*> NotationTable::resolve(std::string_view name) const {
  std::vector<const TableEntry*> out;
  if (name.find('?') != std::string_view::npos) {
    if (auto* e = find(name)) out.push_back(e);
    return out;
  }
  if (auto it = byName_.find(name); it != byName_.end())
    for (auto i : it->second) out.push_back(&entries_[i]);
  return out;
}

std::vector<const TableEntry*> NotationTable::prefixEntries(std::string_view delim) const {
  std::vector<const TableEntry*> out;
  if (auto it = prefix_.find(delim); it != prefix_.end())
    for (auto i : it->second) out.push_back(&entries_[i]);
  return out;
}

std::vector<const TableEntry*> NotationTable::infixEntries(std::string_view delim) const {
  std::vector<const TableEntry*> out;
  if (auto it = infix_.find(delim); it != infix_.end())
    for (auto i : it->second) out.push_back(&entries_[i]);
  return out;
}

const TableEntry* NotationTable::applyEntry() const {
  return apply_ ? &entries_[*apply_] : nullptr;
}

int NotationTable::applyPrecedence() const {
  return apply_ ? entries_[*apply_].notation->precedence : 1000;
}

std::string NotationTable::notationFingerprint() const {
  std::vector<std::string> parts;
  for (const auto& e : entries_)
    if (e.notation)
      parts.push_back(e.path + "|" + formatNotation(*e.notation) + "|" + (e.typed ? "t" : "u"));
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (const auto& p : parts) out += p + "\n";
  return out;
}

std::string NotationTable::displayName(std::string_view path) const {
  auto local = localNameOf(path);
  auto cands = resolve(local);
  if (!cands.empty() && cands.front()->path == path) return std::string(local);
  return std::string(path);
}

std::vector<std::string> visibleTheories(std::string_view theory, const TheoryResolver& resolve) {
  std::vector<std::string> order;
  std::set<std::string, std::less<>> seen;
  std::function<void(std::string_view)> visit = [&](std::string_view name) {
    if (seen.count(name)) return;
    seen.insert(std::string(name));
    const TheoryDecl* thy = resolve(name);
    if (!thy) return;
    order.push_back(std::string(name));
    for (const auto& inc : thy->includes) visit(inc.theory);
  };
  visit(theory);
  return order;
}

NotationTable buildNotationTable(std::string_view theory, const TheoryResolver& resolve) {
  NotationTable table;
  for (const auto& name : visibleTheories(theory, resolve)) {
    const TheoryDecl* thy = resolve(name);
    for (const auto& c : thy->constants)
      table.add({qualify(thy->name, c.name), c.name, c.notation,
                 c.type.has_value() || c.definiens.has_value()});
  }
  return table;
}

bool isErrorMeta(std::string_view name) { return name.starts_with(kErrorMetaPrefix); }

}  // namespace logon
