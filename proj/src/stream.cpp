#include "rlstream/stream.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <stdexcept>
#include <tuple>

#include "rlstream/errors.hpp"

namespace rlstream {

Timestamp Timestamp::parse(std::string_view text) {
  auto bad = [&] { return std::invalid_argument("malformed timestamp '" + std::string(text) + "'"); };
  if (text.empty()) throw bad();
  bool negative = false;
  std::size_t i = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    i = 1;
  }
  std::string_view whole = text.substr(i);
  std::string_view frac;
  if (auto dot = whole.find('.'); dot != std::string_view::npos) {
    frac = whole.substr(dot + 1);
    whole = whole.substr(0, dot);
    if (frac.empty()) throw bad();
  }
  if (whole.empty() || frac.size() > 6) throw bad();
  auto digits = [](std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
  };
  if (!digits(whole) || !digits(frac)) throw bad();

  std::int64_t w = 0;
  auto [p, ec] = std::from_chars(whole.data(), whole.data() + whole.size(), w);
  if (ec != std::errc() || w > INT64_MAX / kUnitsPerSecond - 1) throw bad();
  std::int64_t f = 0;
  for (std::size_t k = 0; k < 6; ++k) f = f * 10 + (k < frac.size() ? frac[k] - '0' : 0);
  std::int64_t units = w * kUnitsPerSecond + f;
  return Timestamp(negative ? -units : units);
}

std::string to_string(Timestamp t) {
  std::int64_t u = t.units();
  std::string sign = u < 0 ? "-" : "";
  std::uint64_t mag = u < 0 ? static_cast<std::uint64_t>(-(u + 1)) + 1 : static_cast<std::uint64_t>(u);
  std::string out = sign + std::to_string(mag / Timestamp::kUnitsPerSecond);
  std::uint64_t frac = mag % Timestamp::kUnitsPerSecond;
  if (frac != 0) {
    std::string digits = std::to_string(frac);
    digits.insert(0, 6 - digits.size(), '0');
    while (digits.back() == '0') digits.pop_back();
    out += "." + digits;
  }
  return out;
}

std::string to_string(const Atom& atom) {
  std::string out = atom.predicate.name() + "(" + atom.subject.name();
  if (atom.is_role()) out += "," + atom.object.name();
  return out + ")";
}

bool AtomTextOrder::operator()(const Atom& a, const Atom& b) const {
  if (a == b) return false;
  auto key = [](const Atom& x) {
    return std::tie(x.predicate.name(), x.subject.name(), x.object.name());
  };
  if (key(a) != key(b)) return key(a) < key(b);
  return a < b;
}

std::string to_string(const Occurrence& occ) {
  return to_string(occ.atom) + "@" + to_string(occ.timestamp);
}

bool OccurrenceTextOrder::operator()(const Occurrence& a, const Occurrence& b) const {
  if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
  return AtomTextOrder{}(a.atom, b.atom);
}

std::string to_string(const WindowExtent& extent) {
  return "[" + to_string(extent.start) + ", " + to_string(extent.end) + "]";
}

void WindowSpec::validate() const {
  if (slide.units() <= 0) throw std::invalid_argument("window slide must be positive");
  if (width.units() <= 0) throw std::invalid_argument("window width must be positive");
  if (slide > width) throw std::invalid_argument("window slide must not exceed the width");
}

namespace {

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class AtomScanner {
 public:
  AtomScanner(std::string_view line, std::size_t pos, std::size_t line_no)
      : line_(line), pos_(pos), line_no_(line_no) {}

  Atom scan() {
    std::string pred = name("a predicate name");
    expect('(');
    std::string first = name("an individual");
    skip_ws();
    if (peek() == ',') {
      ++pos_;
      std::string second = name("an individual");
      expect(')');
      finish();
      return Atom::make_role(pred, first, second);
    }
    expect(')');
    finish();
    return Atom::make_concept(pred, first);
  }

 private:
  char peek() const { return pos_ < line_.size() ? line_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(line_no_, pos_ + 1, what);
  }

  std::string name(const char* what) {
    skip_ws();
    if (!is_name_start(peek())) fail(std::string("expected ") + what);
    std::size_t start = pos_;
    while (pos_ < line_.size() && is_name_char(line_[pos_])) ++pos_;
    return std::string(line_.substr(start, pos_ - start));
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void finish() {
    skip_ws();
    if (pos_ < line_.size() && line_[pos_] != '#') fail("unexpected trailing input");
  }

  std::string_view line_;
  std::size_t pos_;
  std::size_t line_no_;
};

}  // namespace

Stream parse_stream(std::string_view text) {
  Stream out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    std::size_t i = 0;
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i == line.size() || line[i] == '#') continue;
    std::size_t ts_begin = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    Timestamp ts;
    try {
      ts = Timestamp::parse(line.substr(ts_begin, i - ts_begin));
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, ts_begin + 1, e.what());
    }
    if (i == line.size()) throw ParseError(line_no, i + 1, "expected an atom after the timestamp");
    Atom atom = AtomScanner(line, i, line_no).scan();

    if (!out.empty() && ts < out.back().timestamp) {
      throw OutOfOrder(line_no, ts_begin + 1,
                       "timestamp " + to_string(ts) + " precedes " + to_string(out.back().timestamp));
    }
    if (out.empty() || out.back().timestamp != ts) out.push_back(MomentaryABox{ts, {}});
    out.back().atoms.insert(atom);
  }
  return out;
}

std::string to_string(const Stream& stream) {
  std::string out;
  for (const auto& abox : stream) {
    std::vector<Atom> atoms(abox.atoms.begin(), abox.atoms.end());
    std::sort(atoms.begin(), atoms.end(), AtomTextOrder{});
    for (const auto& a : atoms) out += to_string(abox.timestamp) + " " + to_string(a) + "\n";
  }
  return out;
}

std::vector<WindowExtent> window_extents(const WindowSpec& spec, Timestamp horizon) {
  spec.validate();
  std::vector<WindowExtent> out;
  for (std::int64_t k = 0;; ++k) {
    Timestamp end = spec.origin + k * spec.slide;
    if (end > horizon) break;
    out.push_back({end - spec.width, end});
  }
  return out;
}

std::span<const MomentaryABox> window_slice(std::span<const MomentaryABox> stream,
                                            const WindowExtent& extent) {
  auto first = std::lower_bound(stream.begin(), stream.end(), extent.start,
                                [](const MomentaryABox& a, Timestamp t) { return a.timestamp < t; });
  auto last = std::upper_bound(first, stream.end(), extent.end,
                               [](Timestamp t, const MomentaryABox& a) { return t < a.timestamp; });
  return {first, last};
}

std::set<Occurrence> window_abox(std::span<const MomentaryABox> stream, const WindowExtent& extent) {
  std::set<Occurrence> out;
  for (const auto& abox : window_slice(stream, extent))
    for (const auto& atom : abox.atoms) out.insert({atom, abox.timestamp});
  return out;
}

}  // namespace rlstream
