#include "logon/index.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "logon/builtins.hpp"

namespace logon {

std::string_view relationName(Relation r) {
  switch (r) {
    case Relation::Includes: return "Includes";
    case Relation::Declares: return "Declares";
    case Relation::RefersTo: return "RefersTo";
    case Relation::DependsOn: return "DependsOn";
  }
  return "";
}

std::optional<Relation> relationFromName(std::string_view s) {
  for (auto r : {Relation::Includes, Relation::Declares, Relation::RefersTo, Relation::DependsOn})
    if (relationName(r) == s) return r;
  return std::nullopt;
}

const TupleSet& RelationalIndex::of(Relation r) const {
  static const TupleSet empty;
  auto it = tuples.find(r);
  return it == tuples.end() ? empty : it->second;
}

namespace {

bool isLfPrimitive(std::string_view head) {
  for (auto p : {lf::kPi, lf::kLambda, lf::kApply, lf::kArrow, lf::kHole})
    if (head == p) return true;
  return false;
}

void collectConstants(const TermPtr& t, std::set<std::string>& out) {
  if (!t) return;
  forEachSubterm(t, [&](const TermPtr& s, const std::vector<std::size_t>&) {
    if (s->isConstant()) out.insert(s->name());
    else if (s->isComplex() && !isLfPrimitive(s->name())) out.insert(s->name());
  });
}

}  // namespace

RelationalIndex buildRelationalIndex(const ProjectCheck& pc) {
  RelationalIndex ix;
  auto& includes = ix.tuples[Relation::Includes];
  auto& declares = ix.tuples[Relation::Declares];
  auto& refers = ix.tuples[Relation::RefersTo];
  auto& depends = ix.tuples[Relation::DependsOn];

  auto resolve = resolverFor(pc.documents);
  std::set<std::string> declared;
  for (const auto& doc : pc.documents)
    for (const auto& thy : doc.theories) {
      if (resolve(thy.name) != &thy) continue;
      for (const auto& inc : thy.includes)
        if (resolve(inc.theory)) includes.insert({thy.name, inc.theory});
      for (const auto& c : thy.constants) {
        std::string path = qualify(thy.name, c.name);
        if (declared.insert(path).second) declares.insert({thy.name, path});
      }
    }

  for (const auto& u : pc.structure.units) {
    std::set<std::string> used;
    if (const auto* r = pc.store.find(u.id)) {
      collectConstants(r->elaboratedSubject, used);
      if (u.id.component == Component::Definiens) collectConstants(r->elaboratedType, used);
      for (const auto& d : r->dependencies)
        if (d != u.id) depends.insert({u.id.str(), d.str()});
    }
    if (auto p = pc.parsed.find(u.id); p != pc.parsed.end()) collectConstants(p->second.term, used);
    for (const auto& c : used)
      if (declared.count(c) && c != u.id.constant) refers.insert({u.id.constant, c});
  }
  return ix;
}

namespace {

TupleSet inverse(const TupleSet& r) {
  TupleSet out;
  for (const auto& [a, b] : r) out.insert({b, a});
  return out;
}

TupleSet closure(const TupleSet& r) {
  std::map<std::string, std::set<std::string>> succ;
  for (const auto& [a, b] : r) succ[a].insert(b);
  TupleSet out;
  for (const auto& [start, _] : succ) {
    std::vector<std::string> todo(succ[start].begin(), succ[start].end());
    std::set<std::string> seen;
    while (!todo.empty()) {
      std::string n = todo.back();
      todo.pop_back();
      if (!seen.insert(n).second) continue;
      out.insert({start, n});
      if (auto it = succ.find(n); it != succ.end()) todo.insert(todo.end(), it->second.begin(), it->second.end());
    }
  }
  return out;
}

class AlgebraParser {
 public:
  AlgebraParser(const RelationalIndex& ix, std::string_view s) : ix_(ix), s_(s) {}

  TupleSet parse() {
    TupleSet r = expr();
    skip();
    if (i_ != s_.size()) fail("trailing input");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& what) {
    throw UnknownRelation(what + " in relation expression '" + std::string(s_) + "'");
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  std::string ident() {
    skip();
    std::size_t b = i_;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_' ||
                              static_cast<unsigned char>(s_[i_]) >= 0x80))
      ++i_;
    if (b == i_) fail("expected a name");
    return std::string(s_.substr(b, i_ - b));
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  TupleSet expr() {
    std::string name = ident();
    if (auto r = relationFromName(name)) return ix_.of(*r);
    if (!eat('(')) fail("unknown relation " + name);
    TupleSet out;
    if (name == "inverse") {
      out = inverse(expr());
    } else if (name == "closure") {
      out = closure(expr());
    } else if (name == "union") {
      out = expr();
      while (eat(',')) {
        auto more = expr();
        out.insert(more.begin(), more.end());
      }
    } else if (name == "restrict") {
      TupleSet r = expr();
      expect(',');
      std::string thy = ident();
      for (const auto& t : r)
        if (t.second == thy || theoryOf(t.second) == thy) out.insert(t);
    } else {
      fail("unknown operator " + name);
    }
    expect(')');
    return out;
  }

  const RelationalIndex& ix_;
  std::string_view s_;
  std::size_t i_ = 0;
};

}  // namespace

TupleSet evaluate(const RelationalIndex& index, std::string_view expr) { return AlgebraParser(index, expr).parse(); }

std::set<std::string> related(const RelationalIndex& index, const std::string& node, std::string_view expr) {
  std::set<std::string> out;
  for (const auto& [a, b] : evaluate(index, expr))
    if (a == node) out.insert(b);
  return out;
}

std::string headKey(const Term& t) {
  switch (t.kind()) {
    case TermKind::Constant: return t.name();
    case TermKind::Variable: return "$";
    case TermKind::Complex: return "#" + t.name();
  }
  return "";
}

void TermIndex::add(const SlotId& slot, const TermPtr& root, const SourceRef& slotRef) {
  if (!root) return;
  std::vector<std::size_t> path;
  std::function<void(const TermPtr&, const SourceRef&)> go = [&](const TermPtr& t, const SourceRef& outer) {
    SourceRef here = !t->inferred() && t->ref() ? *t->ref() : outer;
    entries_.push_back({slot, path, t, t->inferred(), here});
    auto kids = children(*t);
    for (std::size_t i = 0; i < kids.size(); ++i) {
      path.push_back(i);
      go(kids[i], here);
      path.pop_back();
    }
  };
  go(root, slotRef);
}

void TermIndex::finish() {
  std::stable_sort(entries_.begin(), entries_.end(), [](const IndexEntry& a, const IndexEntry& b) {
    return std::tie(a.ref.file, a.ref.start, a.slot, a.path) < std::tie(b.ref.file, b.ref.start, b.slot, b.path);
  });
  byHead_.clear();
  for (std::size_t i = 0; i < entries_.size(); ++i) byHead_[headKey(*entries_[i].term)].push_back(i);
}

std::vector<std::size_t> TermIndex::candidates(const std::string& key) const {
  auto it = byHead_.find(key);
  return it == byHead_.end() ? std::vector<std::size_t>{} : it->second;
}

TermIndex TermIndex::build(const ProjectCheck& pc) {
  TermIndex ix;
  for (const auto& u : pc.structure.units) {
    TermPtr t;
    if (const auto* r = pc.store.find(u.id)) t = r->elaboratedSubject;
    if (!t)
      if (auto p = pc.parsed.find(u.id); p != pc.parsed.end()) t = p->second.term;
    ix.add(u.id, t, u.ref);
  }
  ix.finish();
  return ix;
}

namespace {

bool isWildcard(const Term& t) {
  if (t.isMeta()) return true;
  return t.hasHead(lf::kApply) && !t.args().empty() && t.args().front()->isMeta();
}

class Matcher {
 public:
  Matcher(const std::vector<std::string>& vars) : vars_(vars.begin(), vars.end()) {}

  bool go(const TermPtr& p, const TermPtr& t) {
    if (isWildcard(*p)) return true;
    switch (p->kind()) {
      case TermKind::Constant:
        return t->isConstant() && t->name() == p->name();
      case TermKind::Variable:
        return variable(*p, t);
      case TermKind::Complex:
        break;
    }
    if (!t->isComplex() || t->name() != p->name()) return false;
    const auto& pb = p->bound();
    const auto& tb = t->bound();
    if (pb.size() != tb.size() || p->args().size() != t->args().size()) return false;
    std::size_t pushed = 0;
    bool ok = true;
    for (std::size_t i = 0; ok && i < pb.size(); ++i) {
      ok = part(pb[i].type, tb[i].type) && part(pb[i].definiens, tb[i].definiens);
      binders_.push_back({pb[i].name, tb[i].name});
      ++pushed;
    }
    for (std::size_t i = 0; ok && i < p->args().size(); ++i) ok = go(p->args()[i], t->args()[i]);
    binders_.resize(binders_.size() - pushed);
    return ok;
  }

  Substitution sigma;

 private:
  bool part(const TermPtr& p, const TermPtr& t) {
    if (!p) return true;
    if (!t) return false;
    return go(p, t);
  }

  // innermost binder with that name on the given side
  const std::pair<std::string, std::string>* boundPattern(const std::string& n) const {
    for (auto it = binders_.rbegin(); it != binders_.rend(); ++it)
      if (it->first == n) return &*it;
    return nullptr;
  }
  const std::pair<std::string, std::string>* boundTarget(const std::string& n) const {
    for (auto it = binders_.rbegin(); it != binders_.rend(); ++it)
      if (it->second == n) return &*it;
    return nullptr;
  }

  bool variable(const Term& p, const TermPtr& t) {
    if (const auto* b = boundPattern(p.name()))
      return t->isVariable() && t->name() == b->second && boundTarget(t->name()) == b;
    if (vars_.count(p.name())) {
      for (const auto& v : freeVariables(t))
        if (boundTarget(v)) return false;
      auto [it, fresh] = sigma.emplace(p.name(), t);
      return fresh || alphaEquivalent(it->second, t);
    }
    return t->isVariable() && t->name() == p.name() && !boundTarget(t->name());
  }

  std::set<std::string> vars_;
  std::vector<std::pair<std::string, std::string>> binders_;
};

}  // namespace

std::optional<Substitution> match(const TermPtr& pattern, const std::vector<std::string>& vars, const TermPtr& t) {
  Matcher m(vars);
  if (!m.go(pattern, t)) return std::nullopt;
  return std::move(m.sigma);
}

bool hasWildcards(const TermPtr& pattern) {
  bool found = false;
  forEachSubterm(pattern, [&](const TermPtr& s, const std::vector<std::size_t>&) { found = found || isWildcard(*s); });
  return found;
}

std::vector<Hit> search(const TermIndex& index, const SearchQuery& q) {
  std::vector<Hit> hits;
  if (!q.pattern) return hits;
  const auto& p = *q.pattern;
  bool anyHead = isWildcard(p) || (p.isVariable() && std::find(q.vars.begin(), q.vars.end(), p.name()) != q.vars.end());
  auto tryEntry = [&](const IndexEntry& e) {
    if (auto s = match(q.pattern, q.vars, e.term)) hits.push_back({&e, std::move(*s)});
  };
  if (anyHead) {
    for (const auto& e : index.entries()) tryEntry(e);
  } else {
    for (auto i : index.candidates(headKey(p))) tryEntry(index.entries()[i]);
  }
  return hits;
}

NotationTable queryTable(const std::vector<Document>& docs) {
  auto resolve = resolverFor(docs);
  TheoryDecl all;
  all.name = "<query>";
  std::set<std::string> seen;
  for (const auto& d : docs)
    for (const auto& t : d.theories)
      if (seen.insert(t.name).second) all.includes.push_back({t.name, {}});
  return buildNotationTable(all.name, [&](std::string_view n) -> const TheoryDecl* {
    return n == all.name ? &all : resolve(n);
  });
}

SearchQuery parseQuery(std::string_view text, const NotationTable& table) {
  SearchQuery q;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip();
  if (i < text.size() && text[i] == '$') {
    for (;;) {
      skip();
      if (i >= text.size() || text[i] != '$') throw QueryParseError("expected '$name' in query variables");
      std::size_t b = ++i;
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != ',' && text[i] != ':')
        ++i;
      if (b == i) throw QueryParseError("empty query variable name");
      std::string v(text.substr(b, i - b));
      if (std::find(q.vars.begin(), q.vars.end(), v) != q.vars.end())
        throw QueryParseError("query variable $" + v + " listed twice");
      q.vars.push_back(std::move(v));
      skip();
      if (i < text.size() && text[i] == ',') {
        ++i;
        continue;
      }
      break;
    }
    if (i >= text.size() || text[i] != ':') throw QueryParseError("expected ':' after query variables");
    ++i;
  } else if (i < text.size() && text[i] == ':') {
    ++i;
  }
  std::string body(text.substr(i));
  ParsingUnit unit{body, {"<query>", 0, body.size()}, "", SlotId::type("<query>")};
  ParseOptions opts;
  opts.scope = q.vars;
  ParseResult r = parseTerm(unit, table, opts);
  if (!r.errors.empty()) throw QueryParseError(r.errors.front().message);
  if (!r.term) throw QueryParseError("empty query");
  q.pattern = r.term;
  return q;
}

}  // namespace logon
