#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rlstream/symbol.hpp"

namespace rlstream {

// Fixed-point decimal with six fractional digits. One unit (1e-6) is the
// minimum separation between distinct stream timestamps.
class Timestamp {
 public:
  static constexpr std::int64_t kUnitsPerSecond = 1'000'000;

  constexpr Timestamp() = default;
  static constexpr Timestamp from_units(std::int64_t units) { return Timestamp(units); }
  static constexpr Timestamp from_integer(std::int64_t whole) {
    return Timestamp(whole * kUnitsPerSecond);
  }
  // Throws std::invalid_argument on malformed text or more than six decimals.
  static Timestamp parse(std::string_view text);

  constexpr std::int64_t units() const { return units_; }

  friend constexpr auto operator<=>(Timestamp, Timestamp) = default;
  friend constexpr Timestamp operator+(Timestamp a, Timestamp b) { return Timestamp(a.units_ + b.units_); }
  friend constexpr Timestamp operator-(Timestamp a, Timestamp b) { return Timestamp(a.units_ - b.units_); }
  friend constexpr Timestamp operator*(std::int64_t k, Timestamp d) { return Timestamp(k * d.units_); }

 private:
  constexpr explicit Timestamp(std::int64_t units) : units_(units) {}
  std::int64_t units_ = 0;
};

// Canonical text: integer part, then a dot and the significant fractional
// digits only when the fraction is nonzero ("3", "2.5", "10.000001").
std::string to_string(Timestamp t);

struct Atom {
  enum class Kind : std::uint8_t { Concept, Role };

  Kind kind = Kind::Concept;
  Symbol predicate;
  Symbol subject;
  Symbol object;  // roles only

  static Atom make_concept(Symbol name, Symbol individual) { return {Kind::Concept, name, individual, {}}; }
  static Atom make_role(Symbol name, Symbol subject, Symbol object) { return {Kind::Role, name, subject, object}; }
  static Atom make_concept(std::string_view name, std::string_view individual) {
    return make_concept(Symbol::intern(name), Symbol::intern(individual));
  }
  static Atom make_role(std::string_view name, std::string_view subject, std::string_view object) {
    return make_role(Symbol::intern(name), Symbol::intern(subject), Symbol::intern(object));
  }

  bool is_role() const { return kind == Kind::Role; }

  friend auto operator<=>(const Atom&, const Atom&) = default;
};

std::string to_string(const Atom& atom);

// Lexicographic by (predicate, arguments) spelling; used for all output.
struct AtomTextOrder {
  bool operator()(const Atom& a, const Atom& b) const;
};

struct Occurrence {
  Atom atom;
  Timestamp timestamp;

  friend auto operator<=>(const Occurrence&, const Occurrence&) = default;
};

std::string to_string(const Occurrence& occ);

// Sorted by (timestamp, atom text).
struct OccurrenceTextOrder {
  bool operator()(const Occurrence& a, const Occurrence& b) const;
};

struct MomentaryABox {
  Timestamp timestamp;
  std::set<Atom> atoms;
};

struct WindowExtent {
  Timestamp start;
  Timestamp end;  // closed: [start, end]

  bool contains(Timestamp t) const { return start <= t && t <= end; }
  friend bool operator==(const WindowExtent&, const WindowExtent&) = default;
};

std::string to_string(const WindowExtent& extent);

struct WindowSpec {
  Timestamp width;
  Timestamp slide;
  Timestamp origin;

  // Throws std::invalid_argument unless 0 < slide <= width.
  void validate() const;
};

using Stream = std::vector<MomentaryABox>;

// One occurrence per line: `TIMESTAMP NAME(ind)` or `TIMESTAMP NAME(ind,ind)`,
// `#` comments. Lines with equal timestamps are grouped; timestamps must not
// decrease. Throws ParseError / OutOfOrder.
Stream parse_stream(std::string_view text);

std::string to_string(const Stream& stream);

// [origin + k*slide - width, origin + k*slide] for k = 0, 1, ... while the
// end does not pass the horizon.
std::vector<WindowExtent> window_extents(const WindowSpec& spec, Timestamp horizon);

std::set<Occurrence> window_abox(std::span<const MomentaryABox> stream, const WindowExtent& extent);

// Momentary ABoxes whose timestamp lies in `extent`, in stream order.
std::span<const MomentaryABox> window_slice(std::span<const MomentaryABox> stream,
                                            const WindowExtent& extent);

}  // namespace rlstream

template <>
struct std::hash<rlstream::Timestamp> {
  std::size_t operator()(rlstream::Timestamp t) const noexcept {
    return std::hash<std::int64_t>{}(t.units());
  }
};

template <>
struct std::hash<rlstream::Atom> {
  std::size_t operator()(const rlstream::Atom& a) const noexcept {
    std::size_t h = a.predicate.id();
    h = h * 0x9e3779b97f4a7c15ull + a.subject.id();
    h = h * 0x9e3779b97f4a7c15ull + a.object.id();
    return h ^ static_cast<std::size_t>(a.kind);
  }
};

template <>
struct std::hash<rlstream::Occurrence> {
  std::size_t operator()(const rlstream::Occurrence& o) const noexcept {
    return std::hash<rlstream::Atom>{}(o.atom) * 31 + std::hash<rlstream::Timestamp>{}(o.timestamp);
  }
};
