#pragma once

#include <compare>
#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "rlstream/symbol.hpp"

namespace rlstream {

struct RoleExpr {
  Symbol name;
  bool inverse = false;

  RoleExpr inverted() const { return {name, !inverse}; }
};

// Spelling-based order so canonical forms do not depend on interning order.
std::weak_ordering compare(const RoleExpr& a, const RoleExpr& b);
inline bool operator==(const RoleExpr& a, const RoleExpr& b) {
  return a.name == b.name && a.inverse == b.inverse;
}
inline bool operator<(const RoleExpr& a, const RoleExpr& b) { return compare(a, b) < 0; }

// Concept built from names, conjunction and existential restriction.
// Conjunctions are kept in canonical form: flattened, sorted by the
// structural order, deduplicated, and never unary. Structural equality is
// therefore semantic equality modulo associativity and commutativity.
class ConceptExpr {
 public:
  enum class Kind { Name, Exists, Conj };

  static ConceptExpr name(Symbol cname);
  static ConceptExpr name(std::string_view cname) { return name(Symbol::intern(cname)); }
  static ConceptExpr exists(RoleExpr role, ConceptExpr filler);
  static ConceptExpr conj(std::vector<ConceptExpr> parts);
  static ConceptExpr conj(ConceptExpr left, ConceptExpr right);

  Kind kind() const { return kind_; }
  Symbol concept_name() const { return name_; }
  const RoleExpr& role() const { return role_; }
  const ConceptExpr& filler() const { return children_.front(); }
  std::span<const ConceptExpr> conjuncts() const { return children_; }

  // Concept and role names mentioned anywhere in the tree.
  void collect_names(std::set<Symbol>& concepts, std::set<Symbol>& roles) const;
  bool mentions_concept(Symbol cname) const;
  bool mentions_role(Symbol role) const;
  std::size_t size() const;

  friend std::weak_ordering compare(const ConceptExpr& a, const ConceptExpr& b);
  friend bool operator==(const ConceptExpr& a, const ConceptExpr& b) { return compare(a, b) == 0; }
  friend bool operator<(const ConceptExpr& a, const ConceptExpr& b) { return compare(a, b) < 0; }

 private:
  ConceptExpr() = default;

  Kind kind_ = Kind::Name;
  Symbol name_;
  RoleExpr role_;
  std::vector<ConceptExpr> children_;  // Exists: {filler}; Conj: conjuncts
};

struct ConceptInclusion {
  ConceptExpr body;
  Symbol head;
};

struct NegativeInclusion {
  ConceptExpr body;
};

// Stored with a non-inverse superrole: R ⊑ inv(Q) is kept as inv(R) ⊑ Q.
struct RoleInclusion {
  RoleExpr sub;
  RoleExpr sup;

  static RoleInclusion make(RoleExpr sub, RoleExpr sup);
};

using Axiom = std::variant<ConceptInclusion, NegativeInclusion, RoleInclusion>;

std::weak_ordering compare(const Axiom& a, const Axiom& b);
inline bool operator==(const Axiom& a, const Axiom& b) { return compare(a, b) == 0; }

class TBox {
 public:
  TBox() = default;
  explicit TBox(std::vector<Axiom> axioms);

  std::span<const Axiom> axioms() const { return axioms_; }
  const std::set<Symbol>& concept_names() const { return concepts_; }
  const std::set<Symbol>& role_names() const { return roles_; }
  bool empty() const { return axioms_.empty(); }

  std::vector<ConceptInclusion> concept_inclusions() const;
  std::vector<NegativeInclusion> negative_inclusions() const;
  std::vector<RoleInclusion> role_inclusions() const;

  // Set semantics: axiom order is irrelevant.
  friend bool operator==(const TBox& a, const TBox& b);

 private:
  std::vector<Axiom> axioms_;  // first-occurrence order, duplicates dropped
  std::set<Symbol> concepts_;
  std::set<Symbol> roles_;
};

// Parses the line-oriented TBox syntax:
//   A & C < D      some R . (A & B) < bot      inv(P) < Q
// A line of two bare names is a role inclusion when either name is known to
// be a role (used under `some`/`inv(...)`, related to a role by another
// inclusion, or listed in known_roles); otherwise it is a concept inclusion.
TBox parse_tbox(std::string_view text, const std::set<std::string>& known_roles = {});

std::string to_string(const RoleExpr& role);
std::string to_string(const ConceptExpr& expr);
std::string to_string(const Axiom& axiom);
std::string to_string(const TBox& tbox);

// ---- inconsistency-normal form ----------------------------------------

struct UnfoldStatus {
  enum class Kind { Exact, Truncated };
  Kind kind = Kind::Exact;
  unsigned depth = 0;  // meaningful for Truncated

  bool exact() const { return kind == Kind::Exact; }
  friend bool operator==(const UnfoldStatus&, const UnfoldStatus&) = default;
};

std::string to_string(const UnfoldStatus& status);

struct UnfoldedInclusion {
  NegativeInclusion original;
  UnfoldStatus status;
  std::vector<ConceptExpr> bodies;  // canonical order
};

struct NormalizedTBox {
  TBox base;
  std::vector<ConceptExpr> flattened_negatives;  // union of all bodies, canonical order
  std::vector<UnfoldedInclusion> inclusions;

  bool exact() const;
};

inline constexpr std::size_t kDefaultBodyCap = 10000;

// Rewrites every negative body by substituting defined concept names with the
// bodies that define them and superroles with their subroles, one nesting
// level per round, keeping the unsubstituted variants too.
NormalizedTBox unfold_negative_inclusions(const TBox& tbox, unsigned max_depth,
                                          std::size_t body_cap = kDefaultBodyCap);

std::vector<std::pair<NegativeInclusion, UnfoldStatus>> nonrecursive_report(
    const TBox& tbox, unsigned max_depth, std::size_t body_cap = kDefaultBodyCap);

}  // namespace rlstream
