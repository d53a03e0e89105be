#include "logon/render.hpp"

#include <climits>

#include "logon/builtins.hpp"

namespace logon {

namespace {

constexpr int kAtom = INT_MAX;

bool isWordChar(unsigned char c) { return std::isalnum(c) || c == '_' || c == '\''; }

bool isWord(std::string_view s) {
  for (unsigned char c : s)
    if (!isWordChar(c)) return false;
  return !s.empty();
}

bool opensBracket(std::string_view s) {
  for (std::string_view b : {"(", "[", "{", "⟨"})
    if (s.ends_with(b)) return true;
  return false;
}

bool closesBracket(std::string_view s) {
  for (std::string_view b : {")", "]", "}", "⟩"})
    if (s.starts_with(b)) return true;
  return false;
}

struct Frag {
  std::string text;
  std::vector<RenderSpan> spans;  // relative to this fragment
};

struct Piece {
  bool delim = false;
  std::string text;     // delimiters
  Frag frag;            // operands
  std::optional<std::size_t> child;  // child index of the operand, if any
};

void shift(std::vector<RenderSpan>& spans, std::size_t by, std::optional<std::size_t> child) {
  for (auto& s : spans) {
    s.start += by;
    s.end += by;
    if (child) s.path.insert(s.path.begin(), *child);
  }
}

bool hasSpace(const std::string& s) { return s.find(' ') != std::string::npos; }

// Joins pieces: no space inside brackets, symbolic delimiters padded
// only when a neighbouring operand contains a space.
Frag join(std::vector<Piece>& pieces) {
  std::vector<bool> pad(pieces.size(), false);  // space before piece i
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
    const Piece& a = pieces[i];
    const Piece& b = pieces[i + 1];
    bool space;
    if (a.delim && opensBracket(a.text))
      space = false;
    else if (b.delim && closesBracket(b.text))
      space = false;
    else if (a.delim && closesBracket(a.text))
      space = !(b.delim && opensBracket(b.text));
    else if ((a.delim && !isWord(a.text)) || (b.delim && !isWord(b.text))) {
      const Piece& d = a.delim ? a : b;
      std::size_t di = a.delim ? i : i + 1;
      bool near = false;
      if (di > 0 && !pieces[di - 1].delim) near = near || hasSpace(pieces[di - 1].frag.text);
      if (di + 1 < pieces.size() && !pieces[di + 1].delim) near = near || hasSpace(pieces[di + 1].frag.text);
      space = near && !(a.delim && b.delim);
      (void)d;
    } else {
      space = true;
    }
    pad[i + 1] = space;
  }
  Frag out;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (pad[i]) out.text += ' ';
    Piece& p = pieces[i];
    if (p.delim) {
      out.text += p.text;
      continue;
    }
    shift(p.frag.spans, out.text.size(), p.child);
    out.text += p.frag.text;
    for (auto& s : p.frag.spans) out.spans.push_back(std::move(s));
  }
  return out;
}

class Renderer {
 public:
  Renderer(const NotationTable& table, const RenderOptions& opts) : table_(table), opts_(opts) {
    applyPrec_ = table_.applyPrecedence();
  }

  Frag term(const TermPtr& t, int req) {
    int prec = kAtom;
    Frag f = raw(t, prec);
    if (prec < req) {
      shift(f.spans, 1, std::nullopt);
      f.text = "(" + f.text + ")";
    }
    f.spans.insert(f.spans.begin(), RenderSpan{{}, 0, f.text.size(), t->inferred()});
    return f;
  }

 private:
  Piece operand(const TermPtr& t, int req, std::size_t child) {
    Piece p;
    p.frag = term(t, req);
    p.child = child;
    return p;
  }
  static Piece delim(std::string s) {
    Piece p;
    p.delim = true;
    p.text = std::move(s);
    return p;
  }

  std::string constantText(const std::string& path) {
    if (const TableEntry* e = table_.find(path); e && e->notation && e->notation->isConstantOnly()) {
      std::string out;
      for (const auto& m : e->notation->markers) out += (out.empty() ? "" : " ") + m.text;
      return out;
    }
    return table_.displayName(path);
  }

  Frag raw(const TermPtr& t, int& prec) {
    prec = kAtom;
    switch (t->kind()) {
      case TermKind::Variable:
        return {t->name(), {}};
      case TermKind::Constant:
        return {constantText(t->name()), {}};
      case TermKind::Complex:
        break;
    }
    if (t->hasHead(lf::kApply) && t->bound().empty() && t->args().size() >= 2)
      return juxtapose(t->args(), 0, prec);
    if (opts_.arrows && t->hasHead(lf::kPi) && t->bound().size() == 1 && t->args().size() == 1 &&
        t->bound()[0].type && !occursFree(t->args()[0], t->bound()[0].name)) {
      if (const TableEntry* arrow = table_.find(lf::kArrow); arrow && arrow->notation)
        return notated(*arrow->notation, t, prec, /*asArrow=*/true);
    }
    const TableEntry* e = table_.find(t->name());
    if (e && e->notation && fits(*e->notation, t)) {
      const Notation& n = *e->notation;
      auto implicit = n.implicitPositions();
      if (!implicit.empty() && opts_.showInferred) return prefixForm(t, prec);
      bool allInferred = true;
      for (int p : implicit) allInferred = allInferred && t->args()[p]->inferred();
      if (allInferred) return notated(n, t, prec, false);
    }
    return prefixForm(t, prec);
  }

  bool fits(const Notation& n, const TermPtr& t) const {
    bool seqVar = false;
    for (const auto& m : n.markers)
      if (m.kind == Marker::Kind::Var && m.sequence) seqVar = true;
    if (n.isConstantOnly()) return false;
    bool boundOk = seqVar ? !t->bound().empty() : static_cast<int>(t->bound().size()) == n.varCount();
    bool seqArg = false;
    for (const auto& m : n.markers)
      if (m.kind == Marker::Kind::Arg && m.sequence) seqArg = true;
    bool argsOk = seqArg ? static_cast<int>(t->args().size()) >= n.arity()
                         : static_cast<int>(t->args().size()) == n.arity();
    return boundOk && argsOk;
  }

  std::size_t boundChildren(const TermPtr& t) const {
    std::size_t k = 0;
    for (const auto& d : t->bound()) k += (d.type ? 1 : 0) + (d.definiens ? 1 : 0);
    return k;
  }

  // `head a1 ... an` with every argument shown.
  Frag prefixForm(const TermPtr& t, int& prec) {
    std::vector<Piece> pieces;
    pieces.push_back(delim(table_.displayName(t->name())));
    if (!t->bound().empty()) {
      pieces.push_back(delim("["));
      appendVars(pieces, t, 0, t->bound().size());
      pieces.push_back(delim("]"));
    }
    std::size_t base = boundChildren(t);
    for (std::size_t i = 0; i < t->args().size(); ++i)
      pieces.push_back(operand(t->args()[i], applyPrec_ + 1, base + i));
    prec = t->args().empty() ? kAtom : applyPrec_;
    return join(pieces);
  }

  Frag juxtapose(const std::vector<TermPtr>& args, std::size_t base, int& prec) {
    std::vector<Piece> pieces;
    for (std::size_t i = 0; i < args.size(); ++i) pieces.push_back(operand(args[i], applyPrec_ + 1, base + i));
    prec = applyPrec_;
    return join(pieces);
  }

  void appendVars(std::vector<Piece>& pieces, const TermPtr& t, std::size_t from, std::size_t to) {
    std::size_t child = 0;
    for (std::size_t i = 0; i < from; ++i)
      child += (t->bound()[i].type ? 1 : 0) + (t->bound()[i].definiens ? 1 : 0);
    for (std::size_t i = from; i < to; ++i) {
      const auto& d = t->bound()[i];
      if (i > from) pieces.push_back(delim(","));
      Frag f{d.name, {}};
      if (d.type) {
        if (!d.type->inferred() || opts_.showInferred) {
          Frag ty = term(d.type, 0);
          shift(ty.spans, d.name.size() + 1, child);
          f.text += ":" + ty.text;
          f.spans = std::move(ty.spans);
        }
        ++child;
      }
      if (d.definiens) ++child;
      Piece p;
      p.frag = std::move(f);
      pieces.push_back(std::move(p));
    }
  }

  Frag notated(const Notation& n, const TermPtr& t, int& prec, bool asArrow) {
    std::vector<Piece> pieces;
    const bool leftOperand = !n.markers.empty() && n.markers.front().kind == Marker::Kind::Arg;
    std::size_t base = boundChildren(t);
    std::size_t nextVar = 0;
    for (std::size_t i = 0; i < n.markers.size(); ++i) {
      const Marker& m = n.markers[i];
      const bool last = i + 1 == n.markers.size();
      switch (m.kind) {
        case Marker::Kind::Delim:
          pieces.push_back(delim(m.text));
          if (m.text == "," && pieces.size() > 1) pieces.back().text = ",";
          break;
        case Marker::Kind::Var: {
          std::size_t count = m.sequence ? t->bound().size() - nextVar : 1;
          appendVars(pieces, t, nextVar, nextVar + count);
          nextVar += count;
          break;
        }
        case Marker::Kind::Arg: {
          int req;
          if (i == 0 && leftOperand)
            req = n.rightAssoc ? n.precedence + 1 : n.precedence;
          else if (last)
            req = leftOperand && !n.rightAssoc ? n.precedence + 1 : n.precedence;
          else
            req = n.markers[i + 1].isDelim() ? 0 : applyPrec_ + 1;
          const bool infix = leftOperand && n.endsWithArg() && n.hasDelimiters();
          if (opts_.parenthesize && infix && !asArrow) req = kAtom;
          if (asArrow) {
            // arrow(A, B) shown for Pi(x:A. B): A is child 0, B child 1
            const TermPtr& a = i == 0 ? t->bound()[0].type : t->args()[0];
            pieces.push_back(operand(a, req, i == 0 ? 0 : 1));
            break;
          }
          int pos = n.argPosition(m);
          if (m.sequence) {
            for (std::size_t k = pos; k < t->args().size(); ++k)
              pieces.push_back(operand(t->args()[k], applyPrec_ + 1, base + k));
          } else {
            pieces.push_back(operand(t->args()[pos], req, base + pos));
          }
          break;
        }
      }
    }
    bool closed = n.startsWithDelim() && !n.markers.empty() && n.markers.back().isDelim();
    prec = closed ? kAtom : n.precedence;
    return join(pieces);
  }

  const NotationTable& table_;
  RenderOptions opts_;
  int applyPrec_ = 1000;
};

}  // namespace

Rendered render(const TermPtr& t, const NotationTable& table, const RenderOptions& options) {
  Renderer r(table, options);
  Frag f = r.term(t, 0);
  return {std::move(f.text), std::move(f.spans)};
}

std::string renderText(const TermPtr& t, const NotationTable& table, const RenderOptions& options) {
  return render(t, table, options).text;
}

}  // namespace logon
