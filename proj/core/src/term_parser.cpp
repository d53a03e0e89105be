#include <algorithm>
#include <cctype>

#include "logon/term_parser.hpp"

namespace logon {

namespace {

bool isQualified(std::string_view s) {
  auto q = s.find('?');
  return q != std::string_view::npos && q > 0 && q + 1 < s.size();
}

struct Tok {
  enum class K { Ident, Delim, LParen, RParen, Colon, Comma, End };
  K k = K::End;
  std::string text;
  std::size_t start = 0;
  std::size_t end = 0;
};

bool isSpace(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool isBuiltin(char c) { return c == '(' || c == ')' || c == ':' || c == ','; }

std::vector<Tok> tokenize(std::string_view s, std::size_t base, const NotationTable& table) {
  std::vector<Tok> out;
  const auto& delims = table.symbolicDelimiters();
  auto delimAt = [&](std::size_t i) -> std::size_t {
    for (const auto& d : delims)
      if (s.substr(i).starts_with(d)) return d.size();
    return 0;
  };
  std::size_t i = 0;
  while (i < s.size()) {
    if (isSpace(s[i])) {
      ++i;
      continue;
    }
    if (s.substr(i).starts_with("//")) {
      while (i < s.size() && s[i] != '\n') ++i;
      continue;
    }
    if (auto n = delimAt(i)) {
      out.push_back({Tok::K::Delim, std::string(s.substr(i, n)), base + i, base + i + n});
      i += n;
      continue;
    }
    if (isBuiltin(s[i])) {
      Tok::K k = s[i] == '(' ? Tok::K::LParen
                 : s[i] == ')' ? Tok::K::RParen
                 : s[i] == ':' ? Tok::K::Colon
                               : Tok::K::Comma;
      out.push_back({k, std::string(1, s[i]), base + i, base + i + 1});
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < s.size() && !isSpace(s[j]) && !isBuiltin(s[j]) && !delimAt(j) &&
           !s.substr(j).starts_with("//"))
      ++j;
    out.push_back({Tok::K::Ident, std::string(s.substr(i, j - i)), base + i, base + j});
    i = j;
  }
  out.push_back({Tok::K::End, "", base + s.size(), base + s.size()});
  return out;
}

class Parser {
 public:
  Parser(const ParsingUnit& unit, const NotationTable& table, const ParseOptions& options)
      : unit_(unit), table_(table), options_(options),
        toks_(tokenize(unit.text, unit.ref.start, table)) {}

  ParseResult run() {
    ParseResult res;
    TermPtr t;
    if (peek().k == Tok::K::End) {
      error(peek().start, peek().end, "empty term");
      t = errorMeta(peek().start, peek().end);
    } else {
      t = parseExpr(0);
    }
    if (peek().k != Tok::K::End) {
      error(peek().start, toks_.back().start, "unexpected '" + peek().text + "'");
      pos_ = toks_.size() - 1;
    }
    res.term = t;
    res.metas = std::move(metas_);
    res.errors = std::move(errors_);
    return res;
  }

 private:
  struct Snapshot {
    std::size_t pos, metas, errors, scope;
    int metaCounter, errorCounter;
  };

  struct Attempt {
    const TableEntry* entry = nullptr;
    bool ok = false;
    std::size_t endPos = 0;
    std::size_t errors = 0;
    std::size_t failPos = 0;
    std::string failMessage;
  };

  struct Failure {
    std::size_t pos;
    std::string message;
  };

  const Tok& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }

  Snapshot snapshot() const {
    return {pos_, metas_.size(), errors_.size(), scope_.size(), metaCounter_, errorCounter_};
  }
  void restore(const Snapshot& s) {
    pos_ = s.pos;
    metas_.resize(s.metas);
    errors_.resize(s.errors);
    scope_.resize(s.scope);
    metaCounter_ = s.metaCounter;
    errorCounter_ = s.errorCounter;
  }

  SourceRef ref(std::size_t start, std::size_t end) const {
    return SourceRef{unit_.ref.file, start, end};
  }

  void error(std::size_t start, std::size_t end, std::string msg) {
    errors_.push_back({ref(start, end), std::move(msg)});
  }

  TermPtr errorMeta(std::size_t start, std::size_t end) {
    std::string name = std::string(kErrorMetaPrefix) + std::to_string(++errorCounter_);
    metas_.push_back({name, nullptr, nullptr});
    return Term::variable(name, ref(start, end));
  }

  bool inScope(std::string_view name) const {
    return std::find(scope_.begin(), scope_.end(), name) != scope_.end() ||
           std::find(options_.scope.begin(), options_.scope.end(), name) != options_.scope.end();
  }

  // Fresh meta, applied to the bound variables in scope (innermost binding
  // of each name only).
  TermPtr freshMeta(std::size_t at) {
    std::string name = options_.metaPrefix + std::to_string(++metaCounter_);
    metas_.push_back({name, nullptr, nullptr});
    auto r = ref(at, at);
    TermPtr m = Term::variable(name, r, true);
    const TableEntry* app = table_.applyEntry();
    if (!app || scope_.empty()) return m;
    std::vector<std::string> vars;
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (std::find(vars.begin(), vars.end(), *it) == vars.end()) vars.push_back(*it);
    std::reverse(vars.begin(), vars.end());
    std::vector<TermPtr> args{m};
    for (const auto& v : vars) args.push_back(Term::variable(v, r, true));
    return Term::complex(app->path, {}, std::move(args), r, true);
  }

  bool isWordDelim(const Tok& t) const {
    return t.k == Tok::K::Ident && table_.isDelimiter(t.text) && !inScope(t.text);
  }

  bool canStart(const Tok& t) const {
    switch (t.k) {
      case Tok::K::LParen:
        return true;
      case Tok::K::Delim:
        return !table_.prefixEntries(t.text).empty();
      case Tok::K::Ident:
        if (isWordDelim(t))
          return !table_.prefixEntries(t.text).empty() || !table_.resolve(t.text).empty();
        return true;
      default:
        return false;
    }
  }

  TermPtr parseExpr(int minPrec) {
    TermPtr left = parsePrefix();
    const int applyPrec = table_.applyPrecedence();
    for (;;) {
      const Tok& t = peek();
      if ((t.k == Tok::K::Delim || isWordDelim(t)) && !table_.infixEntries(t.text).empty()) {
        std::vector<const TableEntry*> cands;
        for (const auto* e : table_.infixEntries(t.text))
          if (e->notation->precedence >= minPrec) cands.push_back(e);
        if (cands.empty()) break;
        if (auto r = tryCandidates(cands, left, left->ref()->start)) {
          left = *r;
          continue;
        }
        break;
      }
      if (table_.applyEntry() && applyPrec >= minPrec && canStart(t) &&
          !(t.k == Tok::K::Ident && isWordDelim(t) && !table_.infixEntries(t.text).empty())) {
        std::vector<TermPtr> args{left};
        while (canStart(peek())) args.push_back(parseExpr(applyPrec + 1));
        auto r = ref(left->ref()->start, args.back()->ref()->end);
        left = Term::complex(table_.applyEntry()->path, {}, std::move(args), r);
        continue;
      }
      break;
    }
    return left;
  }

  TermPtr parsePrefix() {
    const Tok t = peek();
    switch (t.k) {
      case Tok::K::LParen: {
        ++pos_;
        TermPtr inner = parseExpr(0);
        std::size_t end = inner->ref()->end;
        if (peek().k == Tok::K::RParen) {
          end = peek().end;
          ++pos_;
        } else {
          error(peek().start, peek().end, "expected ')'");
        }
        return inner->withRef(ref(t.start, end));
      }
      case Tok::K::Ident: {
        if (t.text.starts_with("/")) {
          ++pos_;
          error(t.start, t.end, "identifiers must not start with '/'");
          return errorMeta(t.start, t.end);
        }
        if (inScope(t.text)) {
          ++pos_;
          return Term::variable(t.text, ref(t.start, t.end));
        }
        if (table_.isDelimiter(t.text)) {
          auto cands = table_.prefixEntries(t.text);
          if (!cands.empty()) {
            Failure fail{t.end, ""};
            if (auto r = tryCandidates(cands, nullptr, t.start, &fail)) return *r;
            if (table_.resolve(t.text).empty()) return recover(t, fail);
          }
        }
        auto found = table_.resolve(t.text);
        ++pos_;
        if (found.empty() && isQualified(t.text))
          return Term::constant(t.text, ref(t.start, t.end));  // left to structure validation
        if (found.empty()) {
          error(t.start, t.end, "unknown identifier '" + t.text + "'");
          return errorMeta(t.start, t.end);
        }
        return Term::constant(found.front()->path, ref(t.start, t.end));
      }
      case Tok::K::Delim: {
        auto cands = table_.prefixEntries(t.text);
        if (!cands.empty()) {
          Failure fail{t.end, ""};
          if (auto r = tryCandidates(cands, nullptr, t.start, &fail)) return *r;
          return recover(t, fail);
        }
        ++pos_;
        error(t.start, t.end, "unexpected '" + t.text + "'");
        return errorMeta(t.start, t.end);
      }
      case Tok::K::End:
        error(t.start, t.end, "expected term");
        return errorMeta(t.start, t.end);
      default:
        error(t.start, t.end, "unexpected '" + t.text + "'");
        if (t.k != Tok::K::RParen) ++pos_;
        return errorMeta(t.start, t.end);
    }
  }

  // All candidates failed: report the furthest failure and skip to it.
  TermPtr recover(const Tok& start, const Failure& fail) {
    error(start.start, std::max(fail.pos, start.end), fail.message);
    while (peek().k != Tok::K::End && peek().end <= fail.pos) ++pos_;
    if (pos_ == 0 || toks_[pos_ - 1].end < start.end) ++pos_;
    return errorMeta(start.start, std::max(fail.pos, start.end));
  }

  std::optional<TermPtr> tryCandidates(const std::vector<const TableEntry*>& cands, TermPtr left,
                                       std::size_t startOffset, Failure* failOut = nullptr) {
    std::vector<Attempt> attempts;
    for (const auto* e : cands) {
      Snapshot s = snapshot();
      Attempt a;
      a.entry = e;
      Failure f{0, ""};
      auto r = parseNotationFrom(*e, left, startOffset, &f);
      a.ok = r.has_value();
      a.endPos = pos_;
      a.errors = errors_.size() - s.errors;
      a.failPos = f.pos;
      a.failMessage = f.message;
      restore(s);
      attempts.push_back(std::move(a));
    }
    const Attempt* best = nullptr;
    for (const auto& a : attempts) {
      if (!a.ok) continue;
      if (!best || a.errors < best->errors || (a.errors == best->errors && a.endPos > best->endPos))
        best = &a;
    }
    if (!best) {
      if (failOut) {
        const Attempt* far = &attempts.front();
        for (const auto& a : attempts)
          if (a.failPos > far->failPos) far = &a;
        *failOut = {far->failPos, far->failMessage};
      }
      return std::nullopt;
    }
    const Attempt* rival = nullptr;
    for (const auto& a : attempts)
      if (&a != best && a.ok && a.errors == best->errors && a.endPos == best->endPos) rival = &a;
    Failure ignored{0, ""};
    auto r = parseNotationFrom(*best->entry, left, startOffset, &ignored);
    if (rival)
      error(startOffset, (*r)->ref()->end,
            "ambiguous notation: " + best->entry->path + " or " + rival->entry->path);
    return r;
  }

  bool matchDelim(const std::string& text) {
    const Tok& t = peek();
    if ((t.k == Tok::K::Delim || t.k == Tok::K::Ident) && t.text == text) {
      ++pos_;
      return true;
    }
    return false;
  }

  // Parses one variable group; sequences accept `x y : A, z : B`.
  bool parseVars(bool sequence, Context& vars, std::vector<std::size_t>& starts, Failure* fail) {
    for (;;) {
      std::vector<const Tok*> names;
      while (peek().k == Tok::K::Ident && !table_.isDelimiter(peek().text) &&
             !peek().text.starts_with("/")) {
        names.push_back(&peek());
        ++pos_;
        if (!sequence) break;
      }
      if (names.empty()) {
        *fail = {peek().start, "expected variable name"};
        return false;
      }
      TermPtr type;
      if (peek().k == Tok::K::Colon) {
        ++pos_;
        type = parseExpr(0);
      }
      for (const auto* n : names) {
        TermPtr ty = type ? type : freshMeta(n->start);
        vars.push_back({n->text, ty, nullptr});
        starts.push_back(n->start);
        scope_.push_back(n->text);
      }
      if (sequence && peek().k == Tok::K::Comma) {
        ++pos_;
        continue;
      }
      return true;
    }
  }

  std::optional<TermPtr> parseNotationFrom(const TableEntry& entry, TermPtr left,
                                           std::size_t startOffset, Failure* fail) {
    const Notation& n = *entry.notation;
    const int applyPrec = table_.applyPrecedence();
    const std::size_t scopeMark = scope_.size();
    Context vars;
    std::vector<std::size_t> varStarts;
    std::map<int, std::vector<TermPtr>> explicitArgs;
    std::size_t end = startOffset;
    auto failWith = [&](std::string msg) {
      *fail = {peek().start, std::move(msg)};
      scope_.resize(scopeMark);
      return std::nullopt;
    };
    for (std::size_t i = 0; i < n.markers.size(); ++i) {
      const Marker& m = n.markers[i];
      switch (m.kind) {
        case Marker::Kind::Delim:
          end = peek().end;
          if (!matchDelim(m.text)) return failWith("expected '" + m.text + "'");
          break;
        case Marker::Kind::Var:
          if (!parseVars(m.sequence, vars, varStarts, fail)) {
            scope_.resize(scopeMark);
            return std::nullopt;
          }
          end = toks_[pos_ - 1].end;
          break;
        case Marker::Kind::Arg: {
          if (i == 0 && left) {
            explicitArgs[n.argPosition(m)] = {left};
            end = left->ref()->end;
            break;
          }
          bool last = i + 1 == n.markers.size();
          int prec = last ? (left && !n.rightAssoc ? n.precedence + 1 : n.precedence)
                          : (n.markers[i + 1].isDelim() ? 0 : applyPrec + 1);
          if (!canStart(peek())) return failWith("expected term");
          auto& slot = explicitArgs[n.argPosition(m)];
          slot.push_back(parseExpr(m.sequence ? applyPrec + 1 : prec));
          while (m.sequence && canStart(peek())) slot.push_back(parseExpr(applyPrec + 1));
          end = slot.back()->ref()->end;
          break;
        }
      }
    }
    auto whole = ref(startOffset, end);
    if (n.isConstantOnly()) {
      scope_.resize(scopeMark);
      return Term::constant(entry.path, whole);
    }
    std::vector<TermPtr> args;
    for (int p = 0; p < n.arity(); ++p) {
      auto it = explicitArgs.find(p);
      if (it != explicitArgs.end())
        args.insert(args.end(), it->second.begin(), it->second.end());
      else
        args.push_back(freshMeta(startOffset));
    }
    scope_.resize(scopeMark);
    bool nest = vars.size() > 1 && n.varCount() == 1 && n.arity() == 1;
    if (!nest) return Term::complex(entry.path, std::move(vars), std::move(args), whole);
    TermPtr body = args.front();
    for (std::size_t k = vars.size(); k-- > 1;)
      body = Term::complex(entry.path, {vars[k]}, {body}, ref(varStarts[k], end));
    return Term::complex(entry.path, {vars[0]}, {body}, whole);
  }

  const ParsingUnit& unit_;
  const NotationTable& table_;
  const ParseOptions& options_;
  std::vector<Tok> toks_;
  std::size_t pos_ = 0;
  std::vector<std::string> scope_;
  Context metas_;
  std::vector<ParseError> errors_;
  int metaCounter_ = 0;
  int errorCounter_ = 0;
};

}  // namespace

ParseResult parseTerm(const ParsingUnit& unit, const NotationTable& table,
                      const ParseOptions& options) {
  return Parser(unit, table, options).run();
}

}  // namespace logon
