#include "logon/lf.hpp"

#include <algorithm>

#include "logon/render.hpp"

namespace logon {

namespace lf {

namespace {

const std::string kTypeS(kType), kKindS(kKind), kPiS(kPi), kLambdaS(kLambda), kApplyS(kApply),
    kArrowS(kArrow), kHoleS(kHole);

bool isConst(const TermPtr& t, std::string_view path) { return t->isConstant() && t->name() == path; }

bool isUniverse(const TermPtr& t) { return isConst(t, kType) || isConst(t, kKind); }

std::set<std::string> ctxNames(const Context& ctx) {
  std::set<std::string> out;
  for (const auto& d : ctx) out.insert(d.name);
  return out;
}

Context extend(const Context& ctx, std::string x, TermPtr a) {
  Context out = ctx;
  out.push_back({std::move(x), std::move(a), nullptr});
  return out;
}

// `_n` for the smallest n not free in `body`.
std::string arrowBinder(const TermPtr& body) {
  auto fv = freeVariables(body);
  for (int n = 1;; ++n) {
    std::string x = "_" + std::to_string(n);
    if (!fv.count(x)) return x;
  }
}

std::optional<TermPtr> rewriteArrow(const TermPtr& t) {
  if (!t->hasHead(kArrow) || t->args().size() != 2 || !t->bound().empty()) return std::nullopt;
  const auto& b = t->args()[1];
  return pi(arrowBinder(b), t->args()[0], b);
}

std::optional<TermPtr> rewriteFlatten(const TermPtr& t) {
  if (!t->hasHead(kApply) || !t->bound().empty()) return std::nullopt;
  if (t->args().size() == 1) return t->args()[0];
  const auto& f = t->args()[0];
  if (!f->hasHead(kApply) || !f->bound().empty()) return std::nullopt;
  std::vector<TermPtr> args(f->args().begin(), f->args().end());
  args.insert(args.end(), t->args().begin() + 1, t->args().end());
  return Term::complex(kApplyS, {}, std::move(args), t->ref(), t->inferred());
}

std::optional<TermPtr> rewriteBeta(const TermPtr& t) {
  if (!t->hasHead(kApply) || t->args().size() < 2) return std::nullopt;
  auto b = peelBinder(t->args()[0], kLambda);
  if (!b) return std::nullopt;
  TermPtr body = substitute(b->body, {{b->name, t->args()[1]}});
  if (t->args().size() == 2) return body;
  std::vector<TermPtr> rest{body};
  rest.insert(rest.end(), t->args().begin() + 2, t->args().end());
  return Term::complex(kApplyS, {}, std::move(rest), t->ref(), t->inferred());
}

std::optional<std::string> metaHeadOf(const TermPtr& t) {
  if (t->isMeta()) return t->name();
  if (t->hasHead(kApply) && !t->args().empty() && t->args()[0]->isMeta()) return t->args()[0]->name();
  return std::nullopt;
}

// Peels Pi binders off the function type for each argument.
TermPtr applyType(SolverApi& api, TermPtr fnType, const std::vector<TermPtr>& args,
                  std::size_t first, const Context& ctx, const TermPtr& fn) {
  for (std::size_t i = first; i < args.size(); ++i) {
    TermPtr ty = api.simplify(fnType);
    auto b = peelBinder(ty, kPi);
    if (!b) {
      if (api.metaHead(ty)) api.block();
      api.fail("not a function: " + api.render(fn) + " : " + api.render(ty));
    }
    api.emitTyping(args[i], b->type, ctx);
    fnType = substitute(b->body, {{b->name, args[i]}});
  }
  return fnType;
}

TermPtr inferUniverse(SolverApi&, const TermPtr&, const Context&) { return Term::constant(kKindS); }

TermPtr inferPi(SolverApi& api, const TermPtr& t, const Context& ctx) {
  auto b = peelBinder(t, kPi);
  if (!b) api.fail("malformed Pi");
  if (!b->type) api.fail("Pi binder " + b->name + " has no type");
  api.emitInhabitable(b->type, ctx);
  TermPtr k = api.simplify(api.infer(b->body, extend(ctx, b->name, b->type)));
  if (isUniverse(k)) return k;
  if (api.metaHead(k)) api.block();
  api.fail("not a type: " + api.render(b->body));
}

TermPtr inferLambda(SolverApi& api, const TermPtr& t, const Context& ctx) {
  auto b = peelBinder(t, kLambda);
  if (!b) api.fail("malformed lambda");
  if (!b->type) api.fail("lambda binder " + b->name + " has no type");
  api.emitInhabitable(b->type, ctx);
  TermPtr body = api.infer(b->body, extend(ctx, b->name, b->type));
  return pi(b->name, b->type, body);
}

TermPtr inferApply(SolverApi& api, const TermPtr& t, const Context& ctx) {
  if (t->args().empty() || !t->bound().empty()) api.fail("malformed application");
  TermPtr f = t->args()[0];
  return applyType(api, api.infer(f, ctx), t->args(), 1, ctx, f);
}

// `c(·; args)` for a typed constant c behaves like `apply(c, args)`.
TermPtr inferNotated(SolverApi& api, const TermPtr& t, const Context& ctx) {
  if (!t->bound().empty() || theoryOf(t->name()) == kTheory) return nullptr;
  TermPtr ty = api.lookupType(t->name());
  if (!ty) api.fail(t->name() + " has no type");
  return applyType(api, ty, t->args(), 0, ctx, Term::constant(t->name()));
}

TermPtr inferHole(SolverApi& api, const TermPtr& t, const Context& ctx) {
  if (t->args().size() != 1) api.fail("malformed hole");
  api.emitInhabitable(t->args()[0], ctx);
  return t->args()[0];
}

void checkPi(SolverApi& api, const TermPtr& f, const TermPtr& type, const Context& ctx) {
  auto expected = peelBinder(type, kPi);
  if (auto lam = peelBinder(f, kLambda)) {
    std::string y = lam->name;
    TermPtr body = lam->body;
    auto fvB = freeVariables(expected->body);
    fvB.erase(expected->name);
    if (fvB.count(y)) {
      auto avoid = fvB;
      for (const auto& v : freeVariables(body)) avoid.insert(v);
      for (const auto& n : ctxNames(ctx)) avoid.insert(n);
      std::string z = freshName(y, avoid);
      body = substitute(body, {{y, Term::variable(z)}});
      y = z;
    }
    TermPtr dom = lam->type ? lam->type : expected->type;
    if (lam->type) api.emitEqual(lam->type, expected->type, ctx);
    api.emitTyping(body, substitute(expected->body, {{expected->name, Term::variable(y)}}),
                   extend(ctx, y, dom));
    return;
  }
  if (api.metaHead(f)) api.block();
  auto avoid = freeVariables(f);
  for (const auto& v : freeVariables(expected->body)) avoid.insert(v);
  for (const auto& n : ctxNames(ctx)) avoid.insert(n);
  std::string z = freshName(expected->name.starts_with("_") ? "x" : expected->name, avoid);
  TermPtr zv = Term::variable(z);
  api.emitTyping(apply(f, {zv}), substitute(expected->body, {{expected->name, zv}}),
                 extend(ctx, z, expected->type));
}

bool equalAtPi(SolverApi& api, const TermPtr& a, const TermPtr& b, const TermPtr& at, const Context& ctx) {
  auto p = peelBinder(at, kPi);
  if (!p) return false;
  auto avoid = freeVariables(a);
  for (const auto& v : freeVariables(b)) avoid.insert(v);
  for (const auto& n : ctxNames(ctx)) avoid.insert(n);
  std::string z = freshName(p->name.starts_with("_") ? "x" : p->name, avoid);
  TermPtr zv = Term::variable(z);
  api.emitEqual(apply(a, {zv}), apply(b, {zv}), extend(ctx, z, p->type),
                substitute(p->body, {{p->name, zv}}));
  return true;
}

// /X = E and apply(/X, x1..xn) = E for distinct bound x1..xn.
bool solvePatternOriented(SolverApi& api, const TermPtr& lhs, const TermPtr& rhs, const Context& ctx) {
  auto bound = ctxNames(ctx);
  auto allowedFree = [&](const std::set<std::string>& allowed) {
    for (const auto& v : freeVariables(rhs))
      if (!Term::isMetaName(v) && bound.count(v) && !allowed.count(v)) return false;
    return true;
  };
  if (lhs->isMeta()) {
    if (!api.isSolvable(lhs->name()) || !allowedFree({})) return false;
    return api.assign(lhs->name(), rhs);
  }
  if (!lhs->hasHead(kApply) || lhs->args().size() < 2 || !lhs->args()[0]->isMeta()) return false;
  const std::string& meta = lhs->args()[0]->name();
  if (!api.isSolvable(meta)) return false;
  std::vector<std::string> vars;
  for (std::size_t i = 1; i < lhs->args().size(); ++i) {
    const auto& a = lhs->args()[i];
    if (!a->isVariable() || a->isMeta() || !bound.count(a->name())) return false;
    if (std::find(vars.begin(), vars.end(), a->name()) != vars.end()) return false;
    vars.push_back(a->name());
  }
  if (!allowedFree({vars.begin(), vars.end()})) return false;
  TermPtr sol = rhs;
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
    TermPtr ty;
    for (auto c = ctx.rbegin(); c != ctx.rend(); ++c)
      if (c->name == *it) {
        ty = c->type ? api.instantiate(c->type) : nullptr;
        break;
      }
    sol = lambda(*it, ty ? ty : Term::variable("/?"), sol);
  }
  return api.assign(meta, sol);
}

bool solvePattern(SolverApi& api, const TermPtr& a, const TermPtr& b, const Context& ctx) {
  return solvePatternOriented(api, a, b, ctx) || solvePatternOriented(api, b, a, ctx);
}

void inhabitable(SolverApi& api, const TermPtr& a, const Context& ctx) {
  TermPtr k = api.simplify(api.infer(a, ctx));
  if (isUniverse(k)) return;
  if (api.metaHead(k)) api.block();
  api.fail("not a type: " + api.render(api.instantiate(a)) + " : " + api.render(k));
}

std::optional<TermPtr> reduceInstantiated(const TermPtr& t) {
  if (auto r = rewriteFlatten(t)) return r;
  return rewriteBeta(t);
}

std::optional<TermPtr> unfold(SolverApi& api, const TermPtr& t) {
  auto defOf = [&](const TermPtr& c) -> TermPtr {
    if (!c->isConstant() || theoryOf(c->name()) == kTheory) return nullptr;
    return api.lookupDefiniens(c->name());
  };
  if (t->isConstant()) {
    if (auto d = defOf(t)) return d;
    return std::nullopt;
  }
  if (t->hasHead(kApply) && !t->args().empty()) {
    if (auto d = defOf(t->args()[0]))
      return apply(d, {t->args().begin() + 1, t->args().end()});
    return std::nullopt;
  }
  if (t->isComplex() && t->bound().empty() && theoryOf(t->name()) != kTheory) {
    if (auto d = defOf(Term::constant(t->name()))) return apply(d, t->args());
  }
  return std::nullopt;
}

}  // namespace

TermPtr pi(std::string x, TermPtr a, TermPtr b) {
  return Term::complex(kPiS, {{std::move(x), std::move(a), nullptr}}, {std::move(b)});
}

TermPtr lambda(std::string x, TermPtr a, TermPtr body) {
  return Term::complex(kLambdaS, {{std::move(x), std::move(a), nullptr}}, {std::move(body)});
}

TermPtr apply(TermPtr f, std::vector<TermPtr> args) {
  if (args.empty()) return f;
  std::vector<TermPtr> all;
  if (f->hasHead(kApply) && f->bound().empty())
    all = f->args();
  else
    all.push_back(f);
  all.insert(all.end(), args.begin(), args.end());
  return Term::complex(kApplyS, {}, std::move(all));
}

TermPtr hole(TermPtr type) { return Term::complex(kHoleS, {}, {std::move(type)}); }

TermPtr arrow(TermPtr a, TermPtr b) { return Term::complex(kArrowS, {}, {std::move(a), std::move(b)}); }

bool isHole(const TermPtr& t) { return t->hasHead(kHole) && t->args().size() == 1; }

std::optional<Binder> peelBinder(const TermPtr& t, std::string_view head) {
  if (!t->hasHead(head) || t->bound().empty() || t->args().size() != 1) return std::nullopt;
  const auto& d = t->bound().front();
  TermPtr body = t->args()[0];
  if (t->bound().size() > 1) {
    Context rest(t->bound().begin() + 1, t->bound().end());
    body = Term::complex(t->name(), std::move(rest), {body});
  }
  return Binder{d.name, d.type, body};
}

TermPtr whnf(const TermPtr& t) {
  TermPtr cur = t;
  for (int i = 0; i < 10000; ++i) {
    std::optional<TermPtr> r = rewriteArrow(cur);
    if (!r) r = rewriteFlatten(cur);
    if (!r) r = rewriteBeta(cur);
    if (!r) return cur;
    cur = *r;
  }
  return cur;
}

RulePlugin plugin() {
  RulePlugin p;
  p.name = "LF";
  RuleSet& r = p.rules;
  r.inference[kTypeS] = inferUniverse;
  r.inference[kPiS] = inferPi;
  r.inference[kLambdaS] = inferLambda;
  r.inference[kApplyS] = inferApply;
  r.checking[kPiS] = checkPi;
  r.equality[kPiS] = equalAtPi;
  r.rewrites.push_back({"arrow", [](SolverApi&, const TermPtr& t) { return rewriteArrow(t); }});
  r.rewrites.push_back({"flatten", [](SolverApi&, const TermPtr& t) { return rewriteFlatten(t); }});
  r.rewrites.push_back({"beta", [](SolverApi&, const TermPtr& t) { return rewriteBeta(t); }});
  r.solutions.push_back({"pattern", solvePattern});
  r.fallbackInference = Named<InferenceRule>{"notated-application", inferNotated};
  r.inhabitable = Named<InhabitabilityRule>{"LF-inhabitable", inhabitable};
  r.metaHead = Named<MetaHeadRule>{"LF-meta-application", metaHeadOf};
  r.reduceInstantiated = Named<InstantiationRule>{"LF-beta", reduceInstantiated};
  r.unfold = Named<UnfoldRule>{"LF-delta", unfold};
  return p;
}

RulePlugin holePlugin() {
  RulePlugin p;
  p.name = "hole";
  p.rules.inference[kHoleS] = inferHole;
  return p;
}

namespace {

std::vector<Hint> lfHints(const HintRequest& req);

}  // namespace

RulePlugin hintPlugin() {
  RulePlugin p;
  p.name = "hints";
  p.rules.completions.push_back({"LF-hints", lfHints});
  return p;
}

const RuleSet& rules() {
  static const RuleSet set = registerRules(registerRules(registerRules({}, plugin()), holePlugin()),
                                           hintPlugin());
  return set;
}

namespace {

struct Candidate {
  std::string name;
  TermPtr head;  // constant or variable
  TermPtr type;
};

// Insertion term for `c args`: the notated form when the arguments fill
// the notation exactly, with implicit positions flagged inferred.
TermPtr buildInsertion(const Candidate& c, const std::vector<TermPtr>& args, const HintRequest& req) {
  if (args.empty()) return c.head;
  if (c.head->isConstant() && req.table) {
    const TableEntry* e = req.table->find(c.head->name());
    if (e && e->notation && e->notation->varCount() == 0 && !e->notation->isConstantOnly() &&
        e->notation->arity() == static_cast<int>(args.size())) {
      auto implicit = e->notation->implicitPositions();
      std::vector<TermPtr> marked = args;
      for (int p : implicit) marked[p] = markInferred(marked[p]);
      return Term::complex(c.head->name(), {}, std::move(marked));
    }
  }
  return apply(c.head, args);
}

std::optional<Hint> tryCandidate(const Candidate& c, const HintRequest& req, const RuleSet& unifyRules,
                                 int& metaCounter) {
  struct Arg {
    TermPtr term;
    TermPtr type;
    bool dependent;
  };
  std::vector<Arg> args;
  Context metas = req.metas;
  std::vector<TermPtr> ctxVars;
  for (const auto& d : req.ctx) ctxVars.push_back(Term::variable(d.name));
  TermPtr ty = c.type;
  for (int guard = 0; guard < 64; ++guard) {
    TermPtr w = whnf(ty);
    auto b = peelBinder(w, kPi);
    if (!b) {
      ty = w;
      break;
    }
    if (occursFree(b->body, b->name)) {
      std::string m = "/H" + std::to_string(++metaCounter);
      metas.push_back({m, nullptr, nullptr});
      TermPtr mt = apply(Term::variable(m), ctxVars);
      args.push_back({mt, b->type, true});
      ty = substitute(b->body, {{b->name, mt}});
    } else {
      args.push_back({nullptr, b->type, false});
      ty = b->body;
    }
  }
  SolveOptions opts;
  opts.reportStuck = false;
  auto res = solveGoals({{Judgment::equal("", ty, req.expected), req.ctx}}, metas, unifyRules,
                        req.lookup, opts);
  if (!res.ok() || res.stuckGoals > 0) return std::nullopt;
  Hint h;
  h.headName = c.name;
  std::vector<TermPtr> built;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const Arg& a = args[i];
    TermPtr argTy = instantiateMetas(a.type, res.substitution, unifyRules);
    TermPtr value;
    if (a.dependent) {
      value = stripRefs(instantiateMetas(a.term, res.substitution, unifyRules));
      if (value->hasHead(kApply) || value->isMeta()) {
        if (auto m = metaHeadOf(value); m && !res.solved[*m]) {
          value = hole(stripRefs(argTy));
          ++h.remainingGoals;
        }
      }
    } else {
      value = hole(stripRefs(argTy));
      ++h.remainingGoals;
    }
    built.push_back(value);
  }
  h.insertion = buildInsertion(c, built, req);
  return h;
}

std::vector<Hint> lfHints(const HintRequest& req) {
  std::vector<Hint> out;
  if (!req.expected || !req.rules) return out;
  RuleSet unifyRules = *req.rules;
  unifyRules.unfold.reset();  // hints do not look through definitions
  int metaCounter = 0;
  std::vector<Candidate> cands;
  for (auto it = req.ctx.rbegin(); it != req.ctx.rend(); ++it) {
    bool shadowed = std::any_of(req.ctx.rbegin(), it, [&](const VarDecl& d) { return d.name == it->name; });
    if (!shadowed && it->type) cands.push_back({it->name, Term::variable(it->name), it->type});
  }
  for (const auto& path : req.constants) {
    if (theoryOf(path) == kTheory) continue;
    LookupResult r = req.lookup ? req.lookup(SlotId::type(path)) : LookupResult{};
    if (!r.term) continue;
    std::string name = req.table ? req.table->displayName(path) : path;
    cands.push_back({name, Term::constant(path), stripRefs(r.term)});
  }
  for (const auto& c : cands)
    if (auto h = tryCandidate(c, req, unifyRules, metaCounter)) out.push_back(std::move(*h));

  TermPtr e = whnf(req.expected);
  if (auto b = peelBinder(e, kPi)) {
    std::set<std::string> avoid = ctxNames(req.ctx);
    for (const auto& v : freeVariables(b->body)) avoid.insert(v);
    std::string x;
    if (b->name.starts_with("_")) {
      for (const char* pool : {"p", "q", "r", "s"})
        if (!avoid.count(pool)) {
          x = pool;
          break;
        }
      if (x.empty()) x = freshName("p", avoid);
    } else {
      x = avoid.count(b->name) ? freshName(b->name, avoid) : b->name;
    }
    Hint h;
    h.headName = "lambda";
    TermPtr body = substitute(b->body, {{b->name, Term::variable(x)}});
    h.insertion = Term::complex(kLambdaS, {{x, markInferred(b->type), nullptr}}, {hole(body)});
    h.remainingGoals = 1;
    out.push_back(std::move(h));
  }
  return out;
}

}  // namespace

}  // namespace lf

std::vector<Hint> collectHints(const HintRequest& request) {
  std::vector<Hint> out;
  if (!request.rules) return out;
  for (const auto& c : request.rules->completions) {
    auto hs = c.rule(request);
    out.insert(out.end(), std::make_move_iterator(hs.begin()), std::make_move_iterator(hs.end()));
  }
  for (auto& h : out)
    if (request.table && h.renderedText.empty()) h.renderedText = renderText(h.insertion, *request.table);
  std::stable_sort(out.begin(), out.end(), [](const Hint& a, const Hint& b) {
    if (a.remainingGoals != b.remainingGoals) return a.remainingGoals < b.remainingGoals;
    return a.headName < b.headName;
  });
  return out;
}

}  // namespace logon
