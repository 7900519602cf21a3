#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace rlstream {

// Interned identifier. Concept names, role names and individuals all share
// one process-wide dictionary; comparison and hashing are on the id.
class Symbol {
 public:
  Symbol() = default;

  static Symbol intern(std::string_view name);

  const std::string& name() const;
  std::uint32_t id() const { return id_; }
  bool valid() const { return id_ != kInvalid; }

  friend bool operator==(Symbol a, Symbol b) { return a.id_ == b.id_; }
  friend auto operator<=>(Symbol a, Symbol b) { return a.id_ <=> b.id_; }

 private:
  static constexpr std::uint32_t kInvalid = 0xffffffffu;
  explicit Symbol(std::uint32_t id) : id_(id) {}
  std::uint32_t id_ = kInvalid;
};

// Orders by spelling rather than by interning order.
struct ByName {
  bool operator()(Symbol a, Symbol b) const { return a.name() < b.name(); }
};

}  // namespace rlstream

template <>
struct std::hash<rlstream::Symbol> {
  std::size_t operator()(rlstream::Symbol s) const noexcept { return s.id(); }
};
