#include "rlstream/symbol.hpp"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace rlstream {
namespace {

struct Dictionary {
  std::shared_mutex mutex;
  std::deque<std::string> names;  // deque: references stay valid on growth
  std::unordered_map<std::string_view, std::uint32_t> ids;
};

Dictionary& dictionary() {
  static Dictionary dict;
  return dict;
}

}  // namespace

Symbol Symbol::intern(std::string_view name) {
  auto& dict = dictionary();
  {
    std::shared_lock lock(dict.mutex);
    if (auto it = dict.ids.find(name); it != dict.ids.end()) return Symbol(it->second);
  }
  std::unique_lock lock(dict.mutex);
  if (auto it = dict.ids.find(name); it != dict.ids.end()) return Symbol(it->second);
  auto id = static_cast<std::uint32_t>(dict.names.size());
  const std::string& stored = dict.names.emplace_back(name);
  dict.ids.emplace(stored, id);
  return Symbol(id);
}

const std::string& Symbol::name() const {
  static const std::string empty;
  if (!valid()) return empty;
  auto& dict = dictionary();
  std::shared_lock lock(dict.mutex);
  return dict.names[id_];
}

}  // namespace rlstream
