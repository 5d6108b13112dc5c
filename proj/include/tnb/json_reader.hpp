#ifndef TNB_JSON_READER_HPP_
#define TNB_JSON_READER_HPP_

#include <cstdint>
#include <set>
#include <string>
#include <type_traits>

#include "tnb/error.hpp"
#include "tnb/io.hpp"

namespace tnb {

// Strict reader over a JSON object: every key must be consumed before
// finish(), otherwise the first unknown key is reported with its full path.
class JsonReader {
 public:
  JsonReader(Json object, std::string path) : object_(std::move(object)), path_(std::move(path)) {
    if (!object_.is_object()) throw ConfigError(where() + ": expected an object");
  }

  bool has(const std::string& key) const { return object_.contains(key); }

  template <typename T>
  T get(const std::string& key, T fallback) {
    used_.insert(key);
    if (!object_.contains(key)) return fallback;
    return convert<T>(key);
  }

  template <typename T>
  T require(const std::string& key) {
    used_.insert(key);
    if (!object_.contains(key)) throw ConfigError(where() + "." + key + ": required field missing");
    return convert<T>(key);
  }

  // Sub-object, or an empty object when absent.
  Json child(const std::string& key) {
    used_.insert(key);
    if (!object_.contains(key)) return Json::object();
    const Json& c = object_.at(key);
    if (!c.is_object()) throw ConfigError(where() + "." + key + ": expected an object");
    return c;
  }

  std::string child_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (const auto& item : object_.items()) {
      if (!used_.count(item.key())) throw ConfigError("unknown key '" + child_path(item.key()) + "'");
    }
  }

 private:
  std::string where() const { return path_.empty() ? "<root>" : path_; }

  template <typename T>
  T convert(const std::string& key) const {
    if constexpr (std::is_integral_v<T> && std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
      const Json& v = object_.at(key);
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        throw ConfigError(child_path(key) + ": expected a non-negative integer");
      }
    }
    try {
      return object_.at(key).get<T>();
    } catch (const Json::exception& e) {
      throw ConfigError(child_path(key) + ": wrong type (" + e.what() + ")");
    }
  }

  Json object_;
  std::string path_;
  std::set<std::string> used_;
};

}  // namespace tnb

#endif  // TNB_JSON_READER_HPP_
