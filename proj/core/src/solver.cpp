#include "logon/solver.hpp"

#include <deque>

#include "logon/term_parser.hpp"
#include "logon/builtins.hpp"

namespace logon {

namespace {

constexpr std::size_t kMaxGoals = 200000;

TermPtr inst(const TermPtr& t, const Substitution& s, const RuleSet& rules, bool elab,
             std::map<std::string, TermPtr>& cache) {
  if (!t) return t;
  if (t->isVariable()) {
    auto it = s.find(t->name());
    if (it == s.end()) return t;
    auto c = cache.find(t->name());
    TermPtr v;
    if (c != cache.end()) {
      v = c->second;
    } else {
      v = inst(it->second, s, rules, elab, cache);
      cache[t->name()] = v;
    }
    return elab ? markInferred(v, t->ref()) : v;
  }
  if (!t->isComplex()) return t;
  bool changed = false;
  Context bound = t->bound();
  for (auto& d : bound) {
    auto ty = inst(d.type, s, rules, elab, cache);
    auto df = inst(d.definiens, s, rules, elab, cache);
    changed = changed || ty != d.type || df != d.definiens;
    d.type = ty;
    d.definiens = df;
  }
  std::vector<TermPtr> args;
  args.reserve(t->args().size());
  for (const auto& a : t->args()) {
    args.push_back(inst(a, s, rules, elab, cache));
    changed = changed || args.back() != a;
  }
  if (!changed) return t;
  TermPtr n = t->withChildren(std::move(bound), std::move(args));
  if (!rules.reduceInstantiated) return n;
  bool reduced = false;
  for (int i = 0; i < 1000; ++i) {
    auto r = rules.reduceInstantiated->rule(n);
    if (!r) break;
    n = *r;
    reduced = true;
  }
  return reduced && elab ? markInferred(n, t->ref()) : n;
}

bool mentionsErrorMeta(const TermPtr& t) {
  if (!t) return false;
  for (const auto& v : freeVariables(t))
    if (isErrorMeta(v)) return true;
  return false;
}

struct Node {
  Judgment::Kind kind = Judgment::Kind::Typing;
  TermPtr a, b, at;
  Context ctx;
  int parent = -1;
  long blockedAt = -1;
};

class Engine final : public SolverApi {
 public:
  Engine(const Context& metas, const RuleSet& rules, const LookupFn& lookup, const SolveOptions& opts)
      : rules_(rules), lookup_(lookup), opts_(opts), fuel_(opts.rewriteFuel) {
    for (const auto& m : metas) {
      metaNames_.push_back(m.name);
      if (isErrorMeta(m.name)) hasErrorMetas_ = true;
    }
    if (!opts_.printer) opts_.printer = [](const TermPtr& t) { return debugString(t); };
  }

  void addGoal(const Judgment& j, const Context& ctx) {
    nodes_.push_back({j.kind, j.subject, j.type, j.at, ctx, -1, -1});
    queue_.push_back(static_cast<int>(nodes_.size()) - 1);
  }

  void run() {
    while (!queue_.empty()) {
      int idx = queue_.front();
      if (nodes_[idx].blockedAt == epoch_ && allBlocked()) {
        handleStuck();
        break;
      }
      queue_.pop_front();
      current_ = idx;
      pending_.clear();
      try {
        if (nodes_.size() > kMaxGoals)
          fail("too many goals", SolveErrorKind::DivergentRewrite);
        process(idx);
        for (auto it = pending_.rbegin(); it != pending_.rend(); ++it) {
          nodes_.push_back(std::move(*it));
          queue_.push_front(static_cast<int>(nodes_.size()) - 1);
        }
        ++epoch_;
      } catch (const SolverBlocked&) {
        nodes_[idx].blockedAt = epoch_;
        queue_.push_back(idx);
      } catch (const SolverFailure& f) {
        recordError(idx, f);
        ++epoch_;
        if (f.kind == SolveErrorKind::DivergentRewrite) queue_.clear();
      }
    }
  }

  SolveResult result(const TermPtr& subject, const TermPtr& type, const std::optional<SourceRef>& unitRef) {
    SolveResult res;
    res.errors = std::move(errors_);
    res.warnings = std::move(warnings_);
    res.dependencies = std::move(deps_);
    res.stuckGoals = stuck_;
    bool quiet = hasErrorMetas_ || !res.errors.empty() || !opts_.reportStuck;
    for (const auto& m : metaNames_) {
      auto it = solutions_.find(m);
      bool ok = it != solutions_.end();
      res.solved[m] = ok;
      if (ok) {
        res.substitution[m] = markInferred(instantiate(it->second));
      } else if (!quiet && !isErrorMeta(m)) {
        SolveError e;
        e.kind = SolveErrorKind::UnsolvedMeta;
        e.message = "could not infer " + m;
        e.ref = occurrenceRef(subject, m);
        if (!e.ref) e.ref = occurrenceRef(type, m);
        if (!e.ref) e.ref = unitRef;
        res.errors.push_back(std::move(e));
      }
    }
    res.elaboratedSubject = instantiateMetas(subject, solutions_, rules_, true);
    res.elaboratedType = instantiateMetas(type, solutions_, rules_, true);
    return res;
  }

  TermPtr solutionOf(const std::string& m) {
    auto it = solutions_.find(m);
    return it == solutions_.end() ? nullptr : instantiate(it->second);
  }

  // SolverApi

  TermPtr infer(const TermPtr& term, const Context& ctx) override {
    TermPtr t = simplify(term);
    switch (t->kind()) {
      case TermKind::Variable: {
        if (Term::isMetaName(t->name())) block();
        for (auto it = ctx.rbegin(); it != ctx.rend(); ++it) {
          if (it->name != t->name()) continue;
          if (!it->type) fail("variable " + t->name() + " has no type");
          return instantiate(it->type);
        }
        fail("unbound variable " + t->name());
      }
      case TermKind::Constant: {
        if (auto r = rules_.inference.find(t->name()); r != rules_.inference.end())
          return r->second(*this, t, ctx);
        TermPtr ty = lookupType(t->name());
        if (!ty) fail(render(t) + " has no type");
        return ty;
      }
      case TermKind::Complex:
        break;
    }
    if (auto r = rules_.inference.find(t->name()); r != rules_.inference.end())
      return r->second(*this, t, ctx);
    if (rules_.fallbackInference)
      if (auto ty = rules_.fallbackInference->rule(*this, t, ctx)) return ty;
    fail("no inference rule for " + t->name(), SolveErrorKind::RuleMissing);
  }

  TermPtr simplify(const TermPtr& term) override {
    TermPtr t = instantiate(term);
    for (bool again = true; again;) {
      again = false;
      for (const auto& rw : rules_.rewrites) {
        auto r = rw.rule(*this, t);
        if (!r) continue;
        if (fuel_ == 0) fail("rewriting does not terminate", SolveErrorKind::DivergentRewrite);
        --fuel_;
        t = *r;
        again = true;
        break;
      }
    }
    return t;
  }

  TermPtr normalize(const TermPtr& term) override {
    TermPtr t = simplify(term);
    if (!t->isComplex()) return t;
    bool changed = false;
    Context bound = t->bound();
    for (auto& d : bound) {
      if (d.type) {
        auto n = normalize(d.type);
        changed = changed || n != d.type;
        d.type = n;
      }
    }
    std::vector<TermPtr> args;
    for (const auto& a : t->args()) {
      args.push_back(normalize(a));
      changed = changed || args.back() != a;
    }
    if (!changed) return t;
    return simplify(t->withChildren(std::move(bound), std::move(args)));
  }

  TermPtr instantiate(const TermPtr& t) override {
    if (solutions_.empty()) return t;
    std::map<std::string, TermPtr> cache;
    return inst(t, solutions_, rules_, false, cache);
  }

  void emitTyping(TermPtr e, TermPtr a, Context ctx) override {
    pending_.push_back({Judgment::Kind::Typing, std::move(e), std::move(a), nullptr, std::move(ctx), current_, -1});
  }
  void emitEqual(TermPtr a, TermPtr b, Context ctx, TermPtr at) override {
    pending_.push_back({Judgment::Kind::Equal, std::move(a), std::move(b), std::move(at), std::move(ctx), current_, -1});
  }
  void emitInhabitable(TermPtr a, Context ctx) override {
    pending_.push_back({Judgment::Kind::Inhabitable, std::move(a), nullptr, nullptr, std::move(ctx), current_, -1});
  }

  TermPtr lookupType(std::string_view path) override { return doLookup(SlotId::type(std::string(path))); }
  TermPtr lookupDefiniens(std::string_view path) override {
    return doLookup(SlotId::definiens(std::string(path)));
  }

  bool isSolvable(std::string_view meta) const override {
    return !isErrorMeta(meta) && !solutions_.count(std::string(meta)) &&
           std::find(metaNames_.begin(), metaNames_.end(), meta) != metaNames_.end();
  }

  std::optional<std::string> metaHead(const TermPtr& t) const override {
    std::optional<std::string> m;
    if (rules_.metaHead)
      m = rules_.metaHead->rule(t);
    else if (t->isMeta())
      m = t->name();
    if (m && !solutions_.count(*m)) return m;
    return std::nullopt;
  }

  bool assign(const std::string& meta, TermPtr value) override {
    if (!isSolvable(meta)) return false;
    TermPtr v = instantiate(value);
    if (occursFree(v, meta)) return false;
    solutions_[meta] = v;
    return true;
  }

  std::string render(const TermPtr& t) const override { return opts_.printer(t); }

 private:
  TermPtr doLookup(const SlotId& slot) {
    LookupResult r = lookup_ ? lookup_(slot) : LookupResult{};
    if (r.dependencies.empty()) deps_.insert(slot);
    deps_.insert(r.dependencies.begin(), r.dependencies.end());
    return r.term ? stripRefs(r.term) : nullptr;
  }

  bool allBlocked() const {
    for (int i : queue_)
      if (nodes_[i].blockedAt != epoch_) return false;
    return true;
  }

  void process(int idx) {
    const Node n = nodes_[idx];
    switch (n.kind) {
      case Judgment::Kind::Typing: {
        TermPtr e = instantiate(n.a);
        TermPtr a = simplify(n.b);
        if (metaHead(e)) block();
        if (a->isComplex())
          if (auto r = rules_.checking.find(a->name()); r != rules_.checking.end()) {
            r->second(*this, e, a, n.ctx);
            return;
          }
        TermPtr inferred = infer(e, n.ctx);
        emitEqual(inferred, a, n.ctx, nullptr);
        return;
      }
      case Judgment::Kind::Equal:
        equal(n.a, n.b, n.at, n.ctx);
        return;
      case Judgment::Kind::Inhabitable:
        if (rules_.inhabitable) {
          rules_.inhabitable->rule(*this, n.a, n.ctx);
        } else {
          warnings_.push_back("no inhabitability rule; accepted " + render(instantiate(n.a)));
        }
        return;
    }
  }

  void equal(const TermPtr& a, const TermPtr& b, const TermPtr& at, const Context& ctx) {
    TermPtr l = simplify(a);
    TermPtr r = simplify(b);
    if (alphaEquivalent(l, r)) return;
    for (const auto& s : rules_.solutions)
      if (s.rule(*this, l, r, ctx)) return;
    if (metaHead(l) || metaHead(r)) block();
    if (at) {
      TermPtr ty = simplify(at);
      if (ty->isComplex())
        if (auto rule = rules_.equality.find(ty->name()); rule != rules_.equality.end())
          if (rule->second(*this, l, r, ty, ctx)) return;
    }
    congruence(l, r, at, ctx);
  }

  void congruence(const TermPtr& l, const TermPtr& r, const TermPtr& at, const Context& ctx) {
    if (l->isComplex() && r->isComplex() && l->name() == r->name() &&
        l->bound().size() == r->bound().size() && l->args().size() == r->args().size()) {
      Substitution sl, sr;
      Context inner = ctx;
      std::set<std::string> avoid = freeVariables(l);
      for (const auto& v : freeVariables(r)) avoid.insert(v);
      for (const auto& d : ctx) avoid.insert(d.name);
      for (std::size_t i = 0; i < l->bound().size(); ++i) {
        const auto& dl = l->bound()[i];
        const auto& dr = r->bound()[i];
        TermPtr tl = dl.type ? substitute(dl.type, sl) : nullptr;
        TermPtr tr = dr.type ? substitute(dr.type, sr) : nullptr;
        if (tl && tr) emitEqual(tl, tr, inner, nullptr);
        std::string z = avoid.count(dl.name) ? freshName(dl.name, avoid) : dl.name;
        avoid.insert(z);
        if (z != dl.name) sl[dl.name] = Term::variable(z);
        if (z != dr.name) sr[dr.name] = Term::variable(z);
        inner.push_back({z, tl ? tl : tr, nullptr});
      }
      for (std::size_t i = 0; i < l->args().size(); ++i)
        emitEqual(substitute(l->args()[i], sl), substitute(r->args()[i], sr), inner, nullptr);
      return;
    }
    if (rules_.unfold) {
      if (auto u = rules_.unfold->rule(*this, l)) {
        emitEqual(*u, r, ctx, at);
        return;
      }
      if (auto u = rules_.unfold->rule(*this, r)) {
        emitEqual(l, *u, ctx, at);
        return;
      }
    }
    fail(render(l) + " ≢ " + render(r));
  }

  std::string renderNode(int idx) {
    const Node& n = nodes_[idx];
    Judgment j{n.kind, "", instantiate(n.a), n.b ? instantiate(n.b) : nullptr,
               n.at ? instantiate(n.at) : nullptr};
    return renderJudgment(j, opts_.printer);
  }

  void recordError(int idx, const SolverFailure& f) {
    SolveError e;
    e.kind = f.kind;
    std::vector<int> chain;
    for (int i = idx; i >= 0; i = nodes_[i].parent) chain.push_back(i);
    int typing = -1;
    for (int i : chain)
      if (nodes_[i].kind == Judgment::Kind::Typing) {
        typing = i;
        break;
      }
    e.message = f.kind == SolveErrorKind::TypingFailed
                    ? "judgment failed: " + renderNode(typing >= 0 ? typing : idx)
                    : f.message;
    for (int i : chain) {
      const Node& n = nodes_[i];
      if (n.kind != Judgment::Kind::Equal && n.a && n.a->ref() && n.a->ref()->length() > 0) {
        e.ref = n.a->ref();
        break;
      }
    }
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) e.log.push_back(renderNode(*it));
    e.log.push_back(f.message);
    errors_.push_back(std::move(e));
  }

  void handleStuck() {
    bool quiet = hasErrorMetas_ || !errors_.empty() || !opts_.reportStuck;
    for (int idx : queue_) {
      ++stuck_;
      if (quiet) continue;
      const Node& n = nodes_[idx];
      if (mentionsErrorMeta(instantiate(n.a)) || (n.b && mentionsErrorMeta(instantiate(n.b)))) continue;
      recordError(idx, {"cannot solve " + renderNode(idx), SolveErrorKind::NonPatternConstraint});
      quiet = true;
    }
    queue_.clear();
  }

  static std::optional<SourceRef> occurrenceRef(const TermPtr& t, const std::string& meta) {
    std::optional<SourceRef> out;
    if (!t) return out;
    forEachSubterm(t, [&](const TermPtr& s, const std::vector<std::size_t>&) {
      if (!out && s->isVariable() && s->name() == meta && s->ref()) out = s->ref();
    });
    return out;
  }

  const RuleSet& rules_;
  const LookupFn& lookup_;
  SolveOptions opts_;
  std::size_t fuel_;
  std::vector<std::string> metaNames_;
  bool hasErrorMetas_ = false;
  Substitution solutions_;
  std::vector<Node> nodes_;
  std::deque<int> queue_;
  std::vector<Node> pending_;
  int current_ = -1;
  long epoch_ = 0;
  std::size_t stuck_ = 0;
  std::vector<SolveError> errors_;
  std::vector<std::string> warnings_;
  std::set<SlotId> deps_;
};

}  // namespace

std::string renderJudgment(const Judgment& j, const Printer& printer) {
  switch (j.kind) {
    case Judgment::Kind::Typing:
      return printer(j.subject) + " : " + printer(j.type);
    case Judgment::Kind::Equal:
      return printer(j.subject) + " ≡ " + printer(j.type) + (j.at ? " : " + printer(j.at) : "");
    case Judgment::Kind::Inhabitable:
      return "⊢ " + printer(j.subject);
  }
  return "";
}

SolveResult solveGoals(const std::vector<GoalSpec>& goals, const Context& metas, const RuleSet& rules,
                       const LookupFn& lookup, const SolveOptions& options) {
  Engine engine(metas, rules, lookup, options);
  for (const auto& g : goals) engine.addGoal(g.judgment, g.ctx);
  engine.run();
  const Judgment* first = goals.empty() ? nullptr : &goals.front().judgment;
  return engine.result(first ? first->subject : nullptr, first ? first->type : nullptr, std::nullopt);
}

SolveResult solve(const ValidationUnit& unit, const RuleSet& rules, const LookupFn& lookup,
                  const SolveOptions& options) {
  Engine engine(unit.metas, rules, lookup, options);
  engine.addGoal(unit.judgment, {});
  engine.run();
  return engine.result(unit.judgment.subject, unit.judgment.type, unit.ref);
}

TermPtr inferType(const TermPtr& t, const Context& ctx, const Context& metas, const RuleSet& rules,
                  const LookupFn& lookup, std::set<SlotId>* dependencies) {
  const std::string result = "/?type";
  Context all = metas;
  all.push_back({result, nullptr, nullptr});
  SolveOptions opts;
  opts.reportStuck = false;
  Engine engine(all, rules, lookup, opts);
  // the type may mention the variables of ctx, so the result meta is
  // applied to them and solved as a pattern
  std::vector<TermPtr> vars;
  for (const auto& d : ctx) vars.push_back(Term::variable(d.name));
  TermPtr goal = vars.empty() ? Term::variable(result)
                              : Term::complex(std::string(lf::kApply), {}, [&] {
                                  std::vector<TermPtr> a{Term::variable(result)};
                                  a.insert(a.end(), vars.begin(), vars.end());
                                  return a;
                                }());
  engine.addGoal(Judgment::typing("", t, goal), ctx);
  engine.run();
  TermPtr ty = engine.solutionOf(result);
  for (std::size_t i = 0; ty && i < vars.size(); ++i) {
    if (!ty->isComplex() || ty->name() != lf::kLambda || ty->bound().size() != 1) return nullptr;
    TermPtr body = ty->args().empty() ? nullptr : ty->args().back();
    ty = body ? substitute(body, {{ty->bound()[0].name, vars[i]}}) : nullptr;
  }
  auto res = engine.result(t, nullptr, std::nullopt);
  if (dependencies) *dependencies = res.dependencies;
  if (!res.errors.empty()) return nullptr;
  return ty;
}

TermPtr instantiateMetas(const TermPtr& t, const Substitution& solutions, const RuleSet& rules,
                         bool elaborate) {
  if (solutions.empty()) return t;
  std::map<std::string, TermPtr> cache;
  return inst(t, solutions, rules, elaborate, cache);
}

bool erasesTo(const TermPtr& e, const TermPtr& p, const RuleSet& rules) {
  if (!e || !p) return e == p;
  bool metaOcc = p->isMeta() || (rules.metaHead && rules.metaHead->rule(p) && p->inferred());
  if (metaOcc) return e->inferred() || equalsStructural(e, p);
  if (e->kind() != p->kind() || e->name() != p->name()) return false;
  if (!p->isComplex()) return true;
  if (e->bound().size() != p->bound().size() || e->args().size() != p->args().size()) return false;
  for (std::size_t i = 0; i < p->bound().size(); ++i) {
    if (e->bound()[i].name != p->bound()[i].name) return false;
    if (!erasesTo(e->bound()[i].type, p->bound()[i].type, rules)) return false;
    if (!erasesTo(e->bound()[i].definiens, p->bound()[i].definiens, rules)) return false;
  }
  for (std::size_t i = 0; i < p->args().size(); ++i)
    if (!erasesTo(e->args()[i], p->args()[i], rules)) return false;
  return true;
}

}  // namespace logon
