#include "rlstream/interpretation.hpp"

#include <algorithm>

namespace rlstream {

void Interpretation::add(const Atom& atom) {
  if (atom.is_role()) {
    add_role(atom.predicate, atom.subject, atom.object);
  } else {
    add_concept(atom.predicate, atom.subject);
  }
}

bool Interpretation::contains(const Atom& atom) const {
  if (atom.is_role()) return role_extension(atom.predicate).count({atom.subject, atom.object}) > 0;
  return concept_extension(atom.predicate).count(atom.subject) > 0;
}

const std::set<Symbol>& Interpretation::concept_extension(Symbol cname) const {
  static const std::set<Symbol> empty;
  auto it = concepts_.find(cname);
  return it == concepts_.end() ? empty : it->second;
}

const std::set<IndividualPair>& Interpretation::role_extension(Symbol role) const {
  static const std::set<IndividualPair> empty;
  auto it = roles_.find(role);
  return it == roles_.end() ? empty : it->second;
}

std::set<Symbol> Interpretation::domain() const {
  std::set<Symbol> out;
  for (const auto& [_, ext] : concepts_) out.insert(ext.begin(), ext.end());
  for (const auto& [_, ext] : roles_) {
    for (const auto& [s, o] : ext) {
      out.insert(s);
      out.insert(o);
    }
  }
  return out;
}

std::vector<Atom> Interpretation::atoms() const {
  std::vector<Atom> out;
  for (const auto& [c, ext] : concepts_)
    for (auto x : ext) out.push_back(Atom::make_concept(c, x));
  for (const auto& [r, ext] : roles_)
    for (const auto& [s, o] : ext) out.push_back(Atom::make_role(r, s, o));
  std::sort(out.begin(), out.end(), AtomTextOrder{});
  return out;
}

std::size_t Interpretation::size() const {
  std::size_t n = 0;
  for (const auto& [_, ext] : concepts_) n += ext.size();
  for (const auto& [_, ext] : roles_) n += ext.size();
  return n;
}

bool operator==(const Interpretation& a, const Interpretation& b) {
  auto same = [](const auto& x, const auto& y) {
    for (const auto& [name, ext] : x) {
      if (ext.empty()) continue;
      auto it = y.find(name);
      if (it == y.end() || it->second != ext) return false;
    }
    return true;
  };
  return same(a.concepts_, b.concepts_) && same(b.concepts_, a.concepts_) &&
         same(a.roles_, b.roles_) && same(b.roles_, a.roles_);
}

Interpretation standard_interpretation(const std::set<Atom>& atoms) {
  Interpretation out;
  for (const auto& a : atoms) out.add(a);
  return out;
}

Interpretation standard_interpretation(std::span<const Atom> atoms) {
  Interpretation out;
  for (const auto& a : atoms) out.add(a);
  return out;
}

Interpretation direct_sum(const Interpretation& a, const Interpretation& b) {
  Interpretation out = a;
  for (const auto& [c, ext] : b.concepts())
    for (auto x : ext) out.add_concept(c, x);
  for (const auto& [r, ext] : b.roles())
    for (const auto& [s, o] : ext) out.add_role(r, s, o);
  return out;
}

Interpretation direct_sum(std::span<const Interpretation> parts) {
  Interpretation out;
  for (const auto& p : parts) out = direct_sum(out, p);
  return out;
}

std::set<IndividualPair> eval_role(const RoleExpr& expr, const Interpretation& interp) {
  const auto& ext = interp.role_extension(expr.name);
  if (!expr.inverse) return ext;
  std::set<IndividualPair> out;
  for (const auto& [s, o] : ext) out.insert({o, s});
  return out;
}

std::set<Symbol> eval_concept(const ConceptExpr& expr, const Interpretation& interp) {
  switch (expr.kind()) {
    case ConceptExpr::Kind::Name:
      return interp.concept_extension(expr.concept_name());
    case ConceptExpr::Kind::Conj: {
      auto parts = expr.conjuncts();
      std::set<Symbol> acc = eval_concept(parts.front(), interp);
      for (std::size_t i = 1; i < parts.size() && !acc.empty(); ++i) {
        std::set<Symbol> next = eval_concept(parts[i], interp);
        std::set<Symbol> both;
        std::set_intersection(acc.begin(), acc.end(), next.begin(), next.end(),
                              std::inserter(both, both.end()));
        acc = std::move(both);
      }
      return acc;
    }
    case ConceptExpr::Kind::Exists: {
      std::set<Symbol> fillers = eval_concept(expr.filler(), interp);
      std::set<Symbol> out;
      if (fillers.empty()) return out;
      for (const auto& [a, b] : eval_role(expr.role(), interp))
        if (fillers.count(b)) out.insert(a);
      return out;
    }
  }
  return {};
}

bool satisfies(const Interpretation& interp, const Atom& atom) { return interp.contains(atom); }

namespace {

bool touches(const ConceptExpr& body, const std::set<Symbol>& changed_concepts,
             const std::set<Symbol>& changed_roles) {
  std::set<Symbol> concepts, roles;
  body.collect_names(concepts, roles);
  auto meets = [](const std::set<Symbol>& x, const std::set<Symbol>& y) {
    return std::any_of(x.begin(), x.end(), [&](Symbol s) { return y.count(s) > 0; });
  };
  return meets(concepts, changed_concepts) || meets(roles, changed_roles);
}

}  // namespace

CanonicalResult canonical_model(const std::set<Atom>& atoms, const TBox& tbox) {
  return canonical_model(standard_interpretation(atoms), tbox);
}

CanonicalResult canonical_model(const Interpretation& start, const TBox& tbox) {
  Interpretation model = start;
  const auto cis = tbox.concept_inclusions();
  const auto nis = tbox.negative_inclusions();
  const auto ris = tbox.role_inclusions();

  std::set<Symbol> changed_concepts, changed_roles;
  for (const auto& [c, _] : model.concepts()) changed_concepts.insert(c);
  for (const auto& [r, _] : model.roles()) changed_roles.insert(r);

  while (true) {
    for (const auto& ni : nis) {
      if (!touches(ni.body, changed_concepts, changed_roles)) continue;
      auto hit = eval_concept(ni.body, model);
      if (!hit.empty()) return Inconsistent{ni, *hit.begin()};
    }

    std::vector<Atom> fresh;
    for (const auto& ci : cis) {
      if (!touches(ci.body, changed_concepts, changed_roles)) continue;
      const auto& have = model.concept_extension(ci.head);
      for (auto x : eval_concept(ci.body, model))
        if (!have.count(x)) fresh.push_back(Atom::make_concept(ci.head, x));
    }
    for (const auto& ri : ris) {
      if (!changed_roles.count(ri.sub.name)) continue;
      const auto& have = model.role_extension(ri.sup.name);
      for (const auto& [a, b] : eval_role(ri.sub, model))
        if (!have.count({a, b})) fresh.push_back(Atom::make_role(ri.sup.name, a, b));
    }

    changed_concepts.clear();
    changed_roles.clear();
    for (const auto& a : fresh) {
      if (model.contains(a)) continue;
      model.add(a);
      (a.is_role() ? changed_roles : changed_concepts).insert(a.predicate);
    }
    if (changed_concepts.empty() && changed_roles.empty()) return model;
  }
}

std::string describe(const Inconsistent& inc) {
  return to_string(Axiom{inc.axiom}) + " fires for " + inc.individual.name();
}

}  // namespace rlstream
