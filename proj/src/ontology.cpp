#include "rlstream/ontology.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>

#include "rlstream/errors.hpp"

namespace rlstream {

// ---- expressions ---------------------------------------------------------

std::weak_ordering compare(const RoleExpr& a, const RoleExpr& b) {
  if (a.name != b.name) {
    if (auto c = a.name.name() <=> b.name.name(); c != 0) return c;
    return a.name <=> b.name;
  }
  return a.inverse <=> b.inverse;
}

ConceptExpr ConceptExpr::name(Symbol cname) {
  ConceptExpr e;
  e.kind_ = Kind::Name;
  e.name_ = cname;
  return e;
}

ConceptExpr ConceptExpr::exists(RoleExpr role, ConceptExpr filler) {
  ConceptExpr e;
  e.kind_ = Kind::Exists;
  e.role_ = role;
  e.children_.push_back(std::move(filler));
  return e;
}

ConceptExpr ConceptExpr::conj(std::vector<ConceptExpr> parts) {
  std::vector<ConceptExpr> flat;
  flat.reserve(parts.size());
  for (auto& p : parts) {
    if (p.kind_ == Kind::Conj) {
      for (auto& c : p.children_) flat.push_back(std::move(c));
    } else {
      flat.push_back(std::move(p));
    }
  }
  std::sort(flat.begin(), flat.end());
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
  if (flat.size() == 1) return std::move(flat.front());
  ConceptExpr e;
  e.kind_ = Kind::Conj;
  e.children_ = std::move(flat);
  return e;
}

ConceptExpr ConceptExpr::conj(ConceptExpr left, ConceptExpr right) {
  std::vector<ConceptExpr> parts;
  parts.push_back(std::move(left));
  parts.push_back(std::move(right));
  return conj(std::move(parts));
}

void ConceptExpr::collect_names(std::set<Symbol>& concepts, std::set<Symbol>& roles) const {
  switch (kind_) {
    case Kind::Name:
      concepts.insert(name_);
      break;
    case Kind::Exists:
      roles.insert(role_.name);
      filler().collect_names(concepts, roles);
      break;
    case Kind::Conj:
      for (const auto& c : children_) c.collect_names(concepts, roles);
      break;
  }
}

bool ConceptExpr::mentions_concept(Symbol cname) const {
  if (kind_ == Kind::Name) return name_ == cname;
  return std::any_of(children_.begin(), children_.end(),
                     [&](const ConceptExpr& c) { return c.mentions_concept(cname); });
}

bool ConceptExpr::mentions_role(Symbol role) const {
  if (kind_ == Kind::Exists && role_.name == role) return true;
  return std::any_of(children_.begin(), children_.end(),
                     [&](const ConceptExpr& c) { return c.mentions_role(role); });
}

std::size_t ConceptExpr::size() const {
  std::size_t n = 1;
  for (const auto& c : children_) n += c.size();
  return n;
}

std::weak_ordering compare(const ConceptExpr& a, const ConceptExpr& b) {
  if (a.kind_ != b.kind_) return static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_);
  switch (a.kind_) {
    case ConceptExpr::Kind::Name:
      if (a.name_ == b.name_) return std::weak_ordering::equivalent;
      if (auto c = a.name_.name() <=> b.name_.name(); c != 0) return c;
      return a.name_ <=> b.name_;
    case ConceptExpr::Kind::Exists:
      if (auto c = compare(a.role_, b.role_); c != 0) return c;
      return compare(a.filler(), b.filler());
    case ConceptExpr::Kind::Conj: {
      std::size_t n = std::min(a.children_.size(), b.children_.size());
      for (std::size_t i = 0; i < n; ++i) {
        if (auto c = compare(a.children_[i], b.children_[i]); c != 0) return c;
      }
      return a.children_.size() <=> b.children_.size();
    }
  }
  return std::weak_ordering::equivalent;
}

// ---- axioms and TBox -----------------------------------------------------

RoleInclusion RoleInclusion::make(RoleExpr sub, RoleExpr sup) {
  if (sup.inverse) return {sub.inverted(), sup.inverted()};
  return {sub, sup};
}

std::weak_ordering compare(const Axiom& a, const Axiom& b) {
  if (a.index() != b.index()) return a.index() <=> b.index();
  if (const auto* ca = std::get_if<ConceptInclusion>(&a)) {
    const auto& cb = std::get<ConceptInclusion>(b);
    if (auto c = compare(ca->body, cb.body); c != 0) return c;
    return compare(ConceptExpr::name(ca->head), ConceptExpr::name(cb.head));
  }
  if (const auto* na = std::get_if<NegativeInclusion>(&a)) {
    return compare(na->body, std::get<NegativeInclusion>(b).body);
  }
  const auto& ra = std::get<RoleInclusion>(a);
  const auto& rb = std::get<RoleInclusion>(b);
  if (auto c = compare(ra.sub, rb.sub); c != 0) return c;
  return compare(ra.sup, rb.sup);
}

TBox::TBox(std::vector<Axiom> axioms) {
  for (auto& ax : axioms) {
    bool duplicate = std::any_of(axioms_.begin(), axioms_.end(),
                                 [&](const Axiom& seen) { return seen == ax; });
    if (duplicate) continue;
    std::visit(
        [&](const auto& a) {
          using T = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<T, ConceptInclusion>) {
            a.body.collect_names(concepts_, roles_);
            concepts_.insert(a.head);
          } else if constexpr (std::is_same_v<T, NegativeInclusion>) {
            a.body.collect_names(concepts_, roles_);
          } else {
            roles_.insert(a.sub.name);
            roles_.insert(a.sup.name);
          }
        },
        ax);
    axioms_.push_back(std::move(ax));
  }
}

std::vector<ConceptInclusion> TBox::concept_inclusions() const {
  std::vector<ConceptInclusion> out;
  for (const auto& ax : axioms_)
    if (const auto* ci = std::get_if<ConceptInclusion>(&ax)) out.push_back(*ci);
  return out;
}

std::vector<NegativeInclusion> TBox::negative_inclusions() const {
  std::vector<NegativeInclusion> out;
  for (const auto& ax : axioms_)
    if (const auto* ni = std::get_if<NegativeInclusion>(&ax)) out.push_back(*ni);
  return out;
}

std::vector<RoleInclusion> TBox::role_inclusions() const {
  std::vector<RoleInclusion> out;
  for (const auto& ax : axioms_)
    if (const auto* ri = std::get_if<RoleInclusion>(&ax)) out.push_back(*ri);
  return out;
}

bool operator==(const TBox& a, const TBox& b) {
  if (a.axioms_.size() != b.axioms_.size()) return false;
  auto less = [](const Axiom& x, const Axiom& y) { return compare(x, y) < 0; };
  std::vector<Axiom> sa(a.axioms_.begin(), a.axioms_.end());
  std::vector<Axiom> sb(b.axioms_.begin(), b.axioms_.end());
  std::sort(sa.begin(), sa.end(), less);
  std::sort(sb.begin(), sb.end(), less);
  return std::equal(sa.begin(), sa.end(), sb.begin(), sb.end());
}

// ---- printing --------------------------------------------------------------

std::string to_string(const RoleExpr& role) {
  return role.inverse ? "inv(" + role.name.name() + ")" : role.name.name();
}

std::string to_string(const ConceptExpr& expr) {
  switch (expr.kind()) {
    case ConceptExpr::Kind::Name:
      return expr.concept_name().name();
    case ConceptExpr::Kind::Exists: {
      std::string filler = to_string(expr.filler());
      if (expr.filler().kind() == ConceptExpr::Kind::Conj) filler = "(" + filler + ")";
      return "some " + to_string(expr.role()) + " . " + filler;
    }
    case ConceptExpr::Kind::Conj: {
      std::string out;
      for (const auto& c : expr.conjuncts()) {
        if (!out.empty()) out += " & ";
        out += to_string(c);
      }
      return out;
    }
  }
  return {};
}

std::string to_string(const Axiom& axiom) {
  return std::visit(
      [](const auto& a) -> std::string {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, ConceptInclusion>) {
          return to_string(a.body) + " < " + a.head.name();
        } else if constexpr (std::is_same_v<T, NegativeInclusion>) {
          return to_string(a.body) + " < bot";
        } else {
          return to_string(a.sub) + " < " + to_string(a.sup);
        }
      },
      axiom);
}

std::string to_string(const TBox& tbox) {
  std::string out;
  for (const auto& ax : tbox.axioms()) out += to_string(ax) + "\n";
  return out;
}

std::string to_string(const UnfoldStatus& status) {
  if (status.exact()) return "Exact";
  return "Truncated(" + std::to_string(status.depth) + ")";
}

// ---- parsing ---------------------------------------------------------------

namespace {

enum class Tok { Name, Lt, Amp, Dot, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t column;
};

std::vector<Token> tokenize(std::string_view line, std::size_t line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t col = i + 1;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i + 1;
      while (j < line.size() &&
             (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_'))
        ++j;
      out.push_back({Tok::Name, std::string(line.substr(i, j - i)), col});
      i = j;
      continue;
    }
    Tok kind;
    switch (c) {
      case '<': kind = Tok::Lt; break;
      case '&': kind = Tok::Amp; break;
      case '.': kind = Tok::Dot; break;
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      default:
        throw ParseError(line_no, col, std::string("unexpected character '") + c + "'");
    }
    out.push_back({kind, std::string(1, c), col});
    ++i;
  }
  out.push_back({Tok::End, "", line.size() + 1});
  return out;
}

// Raw line shape before role/concept disambiguation of bare-name lines.
struct RawLine {
  std::size_t line_no;
  std::optional<Axiom> axiom;         // unambiguous lines
  std::string left, right;            // bare `X < Y` lines
};

class LineParser {
 public:
  LineParser(std::vector<Token> tokens, std::size_t line_no)
      : toks_(std::move(tokens)), line_no_(line_no) {}

  RawLine parse(std::set<std::string>& roles_seen) {
    RawLine raw{line_no_, std::nullopt, {}, {}};
    roles_ = &roles_seen;
    if (at_inverse()) {
      RoleExpr sub = role();
      expect(Tok::Lt, "'<'");
      if (peek().kind == Tok::Name && peek().text == "bot")
        fail(peek(), "a role cannot be a subclass of bot");
      RoleExpr sup = role();
      expect_end();
      raw.axiom = RoleInclusion::make(sub, sup);
      return raw;
    }
    // Bare `X < ...` where the left side is a single name.
    if (peek().kind == Tok::Name && peek().text != "bot" && !at_some() &&
        toks_[pos_ + 1].kind == Tok::Lt) {
      std::string left = toks_[pos_].text;
      pos_ += 2;
      if (at_inverse()) {
        RoleExpr sup = role();
        expect_end();
        roles_->insert(left);
        raw.axiom = RoleInclusion::make(RoleExpr{Symbol::intern(left), false}, sup);
        return raw;
      }
      if (peek().kind == Tok::Name && peek().text != "bot" && toks_[pos_ + 1].kind == Tok::End) {
        raw.left = left;
        raw.right = peek().text;
        return raw;
      }
      pos_ -= 2;
    }
    ConceptExpr body = concept_expr();
    expect(Tok::Lt, "'<'");
    const Token& head = peek();
    if (head.kind != Tok::Name) fail(head, "expected a concept name or 'bot' as head");
    if (toks_[pos_ + 1].kind != Tok::End) {
      // Anything beyond a single name: reject complex heads distinctly.
      std::size_t save = pos_;
      bool complex = false;
      try {
        concept_expr();
        complex = peek().kind == Tok::End;
      } catch (const ParseError&) {
      }
      pos_ = save;
      if (complex) throw RLViolation(line_no_, head.column, "complex concept in inclusion head");
      fail(toks_[pos_ + 1], "unexpected token after head");
    }
    if (head.text == "bot") {
      raw.axiom = NegativeInclusion{std::move(body)};
    } else {
      raw.axiom = ConceptInclusion{std::move(body), Symbol::intern(head.text)};
    }
    return raw;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }

  [[noreturn]] void fail(const Token& t, const std::string& what) const {
    throw ParseError(line_no_, t.column,
                     what + (t.kind == Tok::End ? " at end of line" : " near '" + t.text + "'"));
  }

  void expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail(peek(), std::string("expected ") + what);
    ++pos_;
  }

  void expect_end() {
    if (peek().kind != Tok::End) fail(peek(), "unexpected trailing input");
  }

  bool at_inverse() const {
    return peek().kind == Tok::Name && peek().text == "inv" &&
           toks_[pos_ + 1].kind == Tok::LParen;
  }

  bool at_some() const {
    return peek().kind == Tok::Name && peek().text == "some" &&
           toks_[pos_ + 1].kind == Tok::Name;
  }

  std::string name_token(const char* what) {
    const Token& t = peek();
    if (t.kind != Tok::Name) fail(t, std::string("expected ") + what);
    if (t.text == "bot") fail(t, "'bot' is reserved");
    ++pos_;
    return t.text;
  }

  RoleExpr role() {
    if (at_inverse()) {
      pos_ += 2;
      if (at_inverse()) fail(peek(), "nested inverse roles are not allowed");
      std::string n = name_token("a role name");
      expect(Tok::RParen, "')'");
      roles_->insert(n);
      return {Symbol::intern(n), true};
    }
    std::string n = name_token("a role name");
    roles_->insert(n);
    return {Symbol::intern(n), false};
  }

  ConceptExpr concept_expr() {
    std::vector<ConceptExpr> parts;
    parts.push_back(term());
    while (peek().kind == Tok::Amp) {
      ++pos_;
      parts.push_back(term());
    }
    return ConceptExpr::conj(std::move(parts));
  }

  ConceptExpr term() {
    if (peek().kind == Tok::LParen) {
      ++pos_;
      ConceptExpr inner = concept_expr();
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (at_some()) {
      ++pos_;
      RoleExpr r = role();
      expect(Tok::Dot, "'.'");
      return ConceptExpr::exists(r, term());
    }
    if (at_inverse()) fail(peek(), "inverse role where a concept was expected");
    return ConceptExpr::name(name_token("a concept"));
  }

  std::vector<Token> toks_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
  std::set<std::string>* roles_ = nullptr;
};

}  // namespace

TBox parse_tbox(std::string_view text, const std::set<std::string>& known_roles) {
  std::vector<RawLine> lines;
  std::set<std::string> roles(known_roles.begin(), known_roles.end());
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    auto toks = tokenize(line, line_no);
    if (toks.size() > 1) lines.push_back(LineParser(std::move(toks), line_no).parse(roles));
    start = end + 1;
  }

  // Bare-name lines become role inclusions once either side is a role;
  // iterate because role-ness propagates along chains of such lines.
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& l : lines) {
      if (l.axiom) continue;
      if (roles.count(l.left) || roles.count(l.right)) {
        changed |= roles.insert(l.left).second;
        changed |= roles.insert(l.right).second;
      }
    }
  }

  std::vector<Axiom> axioms;
  for (auto& l : lines) {
    if (l.axiom) {
      axioms.push_back(std::move(*l.axiom));
    } else if (roles.count(l.left)) {
      axioms.push_back(RoleInclusion::make({Symbol::intern(l.left), false},
                                           {Symbol::intern(l.right), false}));
    } else {
      axioms.push_back(
          ConceptInclusion{ConceptExpr::name(l.left), Symbol::intern(l.right)});
    }
  }
  return TBox(std::move(axioms));
}

// ---- unfolding -------------------------------------------------------------

namespace {

struct Definitions {
  std::map<Symbol, std::vector<ConceptExpr>> concept_bodies;  // head -> bodies
  std::map<Symbol, std::vector<RoleExpr>> subroles;           // superrole -> subroles
};

Definitions definitions_of(const TBox& tbox) {
  Definitions defs;
  for (const auto& ci : tbox.concept_inclusions()) defs.concept_bodies[ci.head].push_back(ci.body);
  for (const auto& ri : tbox.role_inclusions()) defs.subroles[ri.sup.name].push_back(ri.sub);
  return defs;
}

class Expander {
 public:
  Expander(const Definitions& defs, std::size_t cap) : defs_(defs), cap_(cap) {}

  // Every variant of `e` where each name occurrence is either kept or
  // replaced by one of its definitions (one level, no recursion into the
  // substituted material).
  std::vector<ConceptExpr> variants(const ConceptExpr& e) const {
    switch (e.kind()) {
      case ConceptExpr::Kind::Name: {
        std::vector<ConceptExpr> out{e};
        if (auto it = defs_.concept_bodies.find(e.concept_name()); it != defs_.concept_bodies.end())
          out.insert(out.end(), it->second.begin(), it->second.end());
        return out;
      }
      case ConceptExpr::Kind::Exists: {
        std::vector<RoleExpr> roles{e.role()};
        if (auto it = defs_.subroles.find(e.role().name); it != defs_.subroles.end()) {
          for (const auto& sub : it->second)
            roles.push_back(e.role().inverse ? sub.inverted() : sub);
        }
        auto fillers = variants(e.filler());
        check(roles.size() * fillers.size());
        std::vector<ConceptExpr> out;
        for (const auto& r : roles)
          for (const auto& f : fillers) out.push_back(ConceptExpr::exists(r, f));
        return out;
      }
      case ConceptExpr::Kind::Conj: {
        std::vector<std::vector<ConceptExpr>> partial{{}};
        for (const auto& c : e.conjuncts()) {
          auto options = variants(c);
          check(partial.size() * options.size());
          std::vector<std::vector<ConceptExpr>> next;
          next.reserve(partial.size() * options.size());
          for (const auto& p : partial) {
            for (const auto& o : options) {
              next.push_back(p);
              next.back().push_back(o);
            }
          }
          partial = std::move(next);
        }
        std::vector<ConceptExpr> out;
        out.reserve(partial.size());
        for (auto& p : partial) out.push_back(ConceptExpr::conj(std::move(p)));
        return out;
      }
    }
    return {e};
  }

  void check(std::size_t n) const {
    if (n > cap_)
      throw BudgetExceeded("negative inclusion unfolding exceeds " + std::to_string(cap_) +
                           " bodies");
  }

 private:
  const Definitions& defs_;
  std::size_t cap_;
};

UnfoldedInclusion unfold_one(const NegativeInclusion& ni, const Expander& expander,
                             unsigned max_depth) {
  std::set<ConceptExpr> all{ni.body};
  std::vector<ConceptExpr> frontier{ni.body};

  auto round = [&](const std::vector<ConceptExpr>& from, bool record) {
    std::vector<ConceptExpr> fresh;
    for (const auto& body : from) {
      for (auto& v : expander.variants(body)) {
        if (all.count(v)) continue;
        if (!record) return std::vector<ConceptExpr>{std::move(v)};
        all.insert(v);
        expander.check(all.size());
        fresh.push_back(std::move(v));
      }
    }
    return fresh;
  };

  UnfoldStatus status;
  for (unsigned depth = 0; depth < max_depth && !frontier.empty(); ++depth)
    frontier = round(frontier, true);
  if (!frontier.empty() && !round(frontier, false).empty())
    status = {UnfoldStatus::Kind::Truncated, max_depth};

  return {ni, status, std::vector<ConceptExpr>(all.begin(), all.end())};
}

}  // namespace

bool NormalizedTBox::exact() const {
  return std::all_of(inclusions.begin(), inclusions.end(),
                     [](const UnfoldedInclusion& u) { return u.status.exact(); });
}

NormalizedTBox unfold_negative_inclusions(const TBox& tbox, unsigned max_depth,
                                          std::size_t body_cap) {
  Definitions defs = definitions_of(tbox);
  Expander expander(defs, body_cap);
  NormalizedTBox out;
  out.base = tbox;
  std::set<ConceptExpr> all;
  for (const auto& ni : tbox.negative_inclusions()) {
    auto unfolded = unfold_one(ni, expander, max_depth);
    all.insert(unfolded.bodies.begin(), unfolded.bodies.end());
    out.inclusions.push_back(std::move(unfolded));
  }
  out.flattened_negatives.assign(all.begin(), all.end());
  return out;
}

std::vector<std::pair<NegativeInclusion, UnfoldStatus>> nonrecursive_report(const TBox& tbox,
                                                                            unsigned max_depth,
                                                                            std::size_t body_cap) {
  std::vector<std::pair<NegativeInclusion, UnfoldStatus>> out;
  for (const auto& u : unfold_negative_inclusions(tbox, max_depth, body_cap).inclusions)
    out.emplace_back(u.original, u.status);
  return out;
}

}  // namespace rlstream
