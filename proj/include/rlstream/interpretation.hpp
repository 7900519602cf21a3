#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rlstream/ontology.hpp"
#include "rlstream/stream.hpp"

namespace rlstream {

using IndividualPair = std::pair<Symbol, Symbol>;

// Finite interpretation under the unique name assumption: individuals denote
// themselves and the domain is whatever the extensions mention. A name with
// no extension and a name with an empty extension are the same thing.
class Interpretation {
 public:
  Interpretation() = default;

  void add(const Atom& atom);
  void add_concept(Symbol cname, Symbol individual) { concepts_[cname].insert(individual); }
  void add_role(Symbol role, Symbol subject, Symbol object) { roles_[role].insert({subject, object}); }

  bool contains(const Atom& atom) const;
  const std::set<Symbol>& concept_extension(Symbol cname) const;
  const std::set<IndividualPair>& role_extension(Symbol role) const;

  std::set<Symbol> domain() const;
  std::vector<Atom> atoms() const;  // AtomTextOrder
  std::size_t size() const;
  bool empty() const { return size() == 0; }

  const std::map<Symbol, std::set<Symbol>>& concepts() const { return concepts_; }
  const std::map<Symbol, std::set<IndividualPair>>& roles() const { return roles_; }

  friend bool operator==(const Interpretation& a, const Interpretation& b);

 private:
  std::map<Symbol, std::set<Symbol>> concepts_;
  std::map<Symbol, std::set<IndividualPair>> roles_;
};

Interpretation standard_interpretation(const std::set<Atom>& atoms);
Interpretation standard_interpretation(std::span<const Atom> atoms);

Interpretation direct_sum(const Interpretation& a, const Interpretation& b);
Interpretation direct_sum(std::span<const Interpretation> parts);

std::set<Symbol> eval_concept(const ConceptExpr& expr, const Interpretation& interp);
std::set<IndividualPair> eval_role(const RoleExpr& expr, const Interpretation& interp);

bool satisfies(const Interpretation& interp, const Atom& atom);

// Failed chase: the negative inclusion that fired and the
// individual in its body extension.
struct Inconsistent {
  NegativeInclusion axiom;
  Symbol individual;
};

using CanonicalResult = std::variant<Interpretation, Inconsistent>;

inline bool is_consistent(const CanonicalResult& r) { return std::holds_alternative<Interpretation>(r); }

// Least model of (atoms, tbox) by forward chaining. Rules whose body mentions
// a name that changed in the previous round are re-evaluated; negative
// inclusions are checked after every round.
CanonicalResult canonical_model(const std::set<Atom>& atoms, const TBox& tbox);
CanonicalResult canonical_model(const Interpretation& start, const TBox& tbox);

std::string describe(const Inconsistent& inc);

}  // namespace rlstream
