#include "logon/term.hpp"

#include <algorithm>
#include <stdexcept>

namespace logon {

LineColumn lineColumnOf(std::string_view text, std::size_t offset) {
  LineColumn lc;
  offset = std::min(offset, text.size());
  for (std::size_t i = 0; i < offset; ++i) {
    if (text[i] == '\n') {
      ++lc.line;
      lc.column = 1;
    } else if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) {
      ++lc.column;
    }
  }
  return lc;
}

TermPtr Term::constant(std::string path, std::optional<SourceRef> ref, bool inferred) {
  auto t = std::shared_ptr<Term>(new Term());
  t->kind_ = TermKind::Constant;
  t->name_ = std::move(path);
  t->ref_ = std::move(ref);
  t->inferred_ = inferred;
  return t;
}

TermPtr Term::variable(std::string name, std::optional<SourceRef> ref, bool inferred) {
  auto t = std::shared_ptr<Term>(new Term());
  t->kind_ = TermKind::Variable;
  t->name_ = std::move(name);
  t->ref_ = std::move(ref);
  t->inferred_ = inferred;
  return t;
}

TermPtr Term::complex(std::string head, Context bound, std::vector<TermPtr> args,
                      std::optional<SourceRef> ref, bool inferred) {
  if (args.empty() && bound.empty())
    throw std::invalid_argument("complex term '" + head + "' needs bound variables or arguments");
  auto t = std::shared_ptr<Term>(new Term());
  t->kind_ = TermKind::Complex;
  t->name_ = std::move(head);
  t->bound_ = std::move(bound);
  t->args_ = std::move(args);
  t->ref_ = std::move(ref);
  t->inferred_ = inferred;
  return t;
}

TermPtr Term::withRef(std::optional<SourceRef> ref) const {
  auto t = std::shared_ptr<Term>(new Term(*this));
  t->ref_ = std::move(ref);
  return t;
}

TermPtr Term::withInferred(bool inferred) const {
  auto t = std::shared_ptr<Term>(new Term(*this));
  t->inferred_ = inferred;
  return t;
}

TermPtr Term::withChildren(Context bound, std::vector<TermPtr> args) const {
  auto t = std::shared_ptr<Term>(new Term(*this));
  t->bound_ = std::move(bound);
  t->args_ = std::move(args);
  return t;
}

std::vector<TermPtr> children(const Term& t) {
  std::vector<TermPtr> out;
  if (!t.isComplex()) return out;
  for (const auto& d : t.bound()) {
    if (d.type) out.push_back(d.type);
    if (d.definiens) out.push_back(d.definiens);
  }
  out.insert(out.end(), t.args().begin(), t.args().end());
  return out;
}

TermPtr childAt(const TermPtr& t, const std::vector<std::size_t>& path) {
  TermPtr cur = t;
  for (auto i : path) {
    auto kids = children(*cur);
    if (i >= kids.size()) return nullptr;
    cur = kids[i];
  }
  return cur;
}

namespace {

TermPtr replaceChild(const TermPtr& t, std::size_t index, const TermPtr& with) {
  Context bound = t->bound();
  std::vector<TermPtr> args = t->args();
  std::size_t k = 0;
  for (auto& d : bound) {
    if (d.type && k++ == index) {
      d.type = with;
      return t->withChildren(std::move(bound), std::move(args));
    }
    if (d.definiens && k++ == index) {
      d.definiens = with;
      return t->withChildren(std::move(bound), std::move(args));
    }
  }
  if (index - k < args.size()) {
    args[index - k] = with;
    return t->withChildren(std::move(bound), std::move(args));
  }
  throw std::out_of_range("child index");
}

}  // namespace

TermPtr replaceAt(const TermPtr& t, const std::vector<std::size_t>& path, const TermPtr& with) {
  if (path.empty()) return with;
  std::vector<std::size_t> rest(path.begin() + 1, path.end());
  auto kids = children(*t);
  if (path[0] >= kids.size()) throw std::out_of_range("path");
  return replaceChild(t, path[0], replaceAt(kids[path[0]], rest, with));
}

bool equalsStructural(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return equalsStructural(*a, *b);
}

bool equalsStructural(const Context& a, const Context& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].name != b[i].name) return false;
    if (!equalsStructural(a[i].type, b[i].type)) return false;
    if (!equalsStructural(a[i].definiens, b[i].definiens)) return false;
  }
  return true;
}

bool equalsStructural(const Term& a, const Term& b) {
  if (&a == &b) return true;
  if (a.kind() != b.kind() || a.name() != b.name()) return false;
  if (!a.isComplex()) return true;
  if (a.args().size() != b.args().size()) return false;
  if (!equalsStructural(a.bound(), b.bound())) return false;
  for (std::size_t i = 0; i < a.args().size(); ++i)
    if (!equalsStructural(a.args()[i], b.args()[i])) return false;
  return true;
}

namespace {

using Renaming = std::vector<std::pair<std::string, std::string>>;

// Looks up the innermost binding of a name; returns its binder depth or -1.
int binderIndex(const std::vector<std::string>& scope, const std::string& name) {
  for (int i = static_cast<int>(scope.size()) - 1; i >= 0; --i)
    if (scope[i] == name) return i;
  return -1;
}

bool alphaEq(const TermPtr& a, const TermPtr& b, std::vector<std::string>& sa,
             std::vector<std::string>& sb) {
  if (!a || !b) return a == b;
  if (a->kind() != b->kind()) return false;
  switch (a->kind()) {
    case TermKind::Constant:
      return a->name() == b->name();
    case TermKind::Variable: {
      int ia = binderIndex(sa, a->name());
      int ib = binderIndex(sb, b->name());
      if (ia != ib) return false;
      return ia >= 0 || a->name() == b->name();
    }
    case TermKind::Complex:
      break;
  }
  if (a->name() != b->name() || a->bound().size() != b->bound().size() ||
      a->args().size() != b->args().size())
    return false;
  std::size_t pushed = 0;
  bool ok = true;
  for (std::size_t i = 0; ok && i < a->bound().size(); ++i) {
    const auto& da = a->bound()[i];
    const auto& db = b->bound()[i];
    ok = alphaEq(da.type, db.type, sa, sb) && alphaEq(da.definiens, db.definiens, sa, sb);
    sa.push_back(da.name);
    sb.push_back(db.name);
    ++pushed;
  }
  for (std::size_t i = 0; ok && i < a->args().size(); ++i)
    ok = alphaEq(a->args()[i], b->args()[i], sa, sb);
  sa.resize(sa.size() - pushed);
  sb.resize(sb.size() - pushed);
  return ok;
}

void collectFree(const TermPtr& t, std::vector<std::string>& scope, std::set<std::string>& out) {
  if (!t) return;
  switch (t->kind()) {
    case TermKind::Constant:
      return;
    case TermKind::Variable:
      if (binderIndex(scope, t->name()) < 0) out.insert(t->name());
      return;
    case TermKind::Complex:
      break;
  }
  std::size_t pushed = 0;
  for (const auto& d : t->bound()) {
    collectFree(d.type, scope, out);
    collectFree(d.definiens, scope, out);
    scope.push_back(d.name);
    ++pushed;
  }
  for (const auto& a : t->args()) collectFree(a, scope, out);
  scope.resize(scope.size() - pushed);
}

}  // namespace

bool alphaEquivalent(const TermPtr& a, const TermPtr& b) {
  std::vector<std::string> sa, sb;
  return alphaEq(a, b, sa, sb);
}

std::set<std::string> freeVariables(const TermPtr& t) {
  std::set<std::string> out;
  std::vector<std::string> scope;
  collectFree(t, scope, out);
  return out;
}

bool occursFree(const TermPtr& t, std::string_view name) {
  return freeVariables(t).count(std::string(name)) > 0;
}

std::size_t termSize(const TermPtr& t) {
  if (!t) return 0;
  std::size_t n = 1;
  for (const auto& c : children(*t)) n += termSize(c);
  return n;
}

std::string freshName(const std::string& base, const std::set<std::string>& avoid) {
  if (!avoid.count(base)) return base;
  for (std::size_t i = 1;; ++i) {
    std::string candidate = base + std::to_string(i);
    if (!avoid.count(candidate)) return candidate;
  }
}

namespace {

struct SubstEnv {
  Substitution values;
  std::map<std::string, std::string> renames;
};

std::set<std::string> capturable(const SubstEnv& env) {
  std::set<std::string> out;
  for (const auto& [_, v] : env.values) {
    auto fv = freeVariables(v);
    out.insert(fv.begin(), fv.end());
  }
  for (const auto& [_, r] : env.renames) out.insert(r);
  return out;
}

TermPtr subst(const TermPtr& t, const SubstEnv& env) {
  if (!t) return t;
  if (env.values.empty() && env.renames.empty()) return t;
  switch (t->kind()) {
    case TermKind::Constant:
      return t;
    case TermKind::Variable: {
      if (auto r = env.renames.find(t->name()); r != env.renames.end())
        return Term::variable(r->second, t->ref(), t->inferred());
      if (auto v = env.values.find(t->name()); v != env.values.end()) return v->second;
      return t;
    }
    case TermKind::Complex:
      break;
  }
  SubstEnv cur = env;
  bool changed = false;
  Context bound;
  bound.reserve(t->bound().size());
  for (std::size_t i = 0; i < t->bound().size(); ++i) {
    const auto& d = t->bound()[i];
    VarDecl nd{d.name, subst(d.type, cur), subst(d.definiens, cur)};
    changed = changed || nd.type != d.type || nd.definiens != d.definiens;
    cur.values.erase(d.name);
    cur.renames.erase(d.name);
    auto danger = capturable(cur);
    if (danger.count(d.name)) {
      std::set<std::string> avoid = danger;
      // avoid everything free in the remaining scope as well
      for (std::size_t j = i + 1; j < t->bound().size(); ++j) {
        auto a = freeVariables(t->bound()[j].type);
        avoid.insert(a.begin(), a.end());
        avoid.insert(t->bound()[j].name);
      }
      for (const auto& a : t->args()) {
        auto fv = freeVariables(a);
        avoid.insert(fv.begin(), fv.end());
      }
      std::string fresh = freshName(d.name, avoid);
      cur.renames[d.name] = fresh;
      nd.name = fresh;
      changed = true;
    }
    bound.push_back(std::move(nd));
  }
  std::vector<TermPtr> args;
  args.reserve(t->args().size());
  for (const auto& a : t->args()) {
    auto na = subst(a, cur);
    changed = changed || na != a;
    args.push_back(std::move(na));
  }
  if (!changed) return t;
  return t->withChildren(std::move(bound), std::move(args));
}

}  // namespace

TermPtr substitute(const TermPtr& t, const Substitution& sigma) {
  SubstEnv env;
  env.values = sigma;
  return subst(t, env);
}

namespace {

void findSubterm(const TermPtr& t, const SourceRef& region, std::vector<std::size_t>& path,
                 std::optional<SubtermMatch>& best) {
  if (!t || t->inferred() || !t->ref() || !t->ref()->contains(region)) return;
  best = SubtermMatch{t, path};
  auto kids = children(*t);
  for (std::size_t i = 0; i < kids.size(); ++i) {
    path.push_back(i);
    findSubterm(kids[i], region, path, best);
    path.pop_back();
  }
}

}  // namespace

std::optional<SubtermMatch> subtermAt(const TermPtr& t, const SourceRef& region) {
  std::optional<SubtermMatch> best;
  std::vector<std::size_t> path;
  findSubterm(t, region, path, best);
  return best;
}

namespace {

template <class F>
TermPtr mapNodes(const TermPtr& t, F&& f) {
  if (!t) return t;
  if (!t->isComplex()) return f(t);
  Context bound;
  for (const auto& d : t->bound())
    bound.push_back({d.name, mapNodes(d.type, f), mapNodes(d.definiens, f)});
  std::vector<TermPtr> args;
  for (const auto& a : t->args()) args.push_back(mapNodes(a, f));
  return f(t->withChildren(std::move(bound), std::move(args)));
}

}  // namespace

TermPtr markInferred(const TermPtr& t, const std::optional<SourceRef>& ref) {
  return mapNodes(t, [&](const TermPtr& n) {
    auto m = n->withInferred(true);
    return ref ? m->withRef(ref) : m;
  });
}

TermPtr stripRefs(const TermPtr& t) {
  return mapNodes(t, [](const TermPtr& n) { return n->ref() ? n->withRef(std::nullopt) : n; });
}

TermPtr shiftRefs(const TermPtr& t, std::ptrdiff_t delta) {
  if (delta == 0) return t;
  return mapNodes(t, [&](const TermPtr& n) {
    if (!n->ref()) return n;
    SourceRef r = *n->ref();
    r.start = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(r.start) + delta);
    r.end = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(r.end) + delta);
    return n->withRef(r);
  });
}

TermPtr mapRefs(const TermPtr& t, const std::function<SourceRef(const SourceRef&)>& f) {
  if (!t) return t;
  return mapNodes(t, [&](const TermPtr& n) {
    if (!n->ref()) return n;
    SourceRef r = f(*n->ref());
    return r == *n->ref() ? n : n->withRef(r);
  });
}

bool isWellScoped(const TermPtr& t, const std::set<std::string>& ambient) {
  for (const auto& v : freeVariables(t))
    if (!ambient.count(v)) return false;
  return true;
}

std::string debugString(const TermPtr& t) {
  if (!t) return "null";
  switch (t->kind()) {
    case TermKind::Constant:
      return t->name();
    case TermKind::Variable:
      return "$" + t->name();
    case TermKind::Complex:
      break;
  }
  std::string out = "C[" + t->name() + ";";
  const char* sep = " ";
  for (const auto& v : t->bound()) {
    out += sep + v.name;
    if (v.type) out += ":" + debugString(v.type);
    if (v.definiens) out += "=" + debugString(v.definiens);
    sep = ", ";
  }
  if (t->bound().empty()) out += " ·";
  out += ";";
  sep = " ";
  for (const auto& a : t->args()) {
    out += sep + debugString(a);
    sep = ", ";
  }
  return out + "]";
}

}  // namespace logon
