#include "wxbits/schema.hpp"

#include <map>
#include <mutex>
#include <regex>

#include "wxbits/error.hpp"

namespace wxbits {

namespace detail {
const std::vector<std::pair<std::string_view, std::string_view>>& schema_sources();
}

namespace {

const std::map<std::string, Json, std::less<>>& registry() {
  static const auto schemas = [] {
    std::map<std::string, Json, std::less<>> out;
    for (const auto& [name, text] : detail::schema_sources()) {
      out.emplace(std::string(name), Json::parse(text));
    }
    return out;
  }();
  return schemas;
}

bool type_matches(const Json& v, std::string_view type) {
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "boolean") return v.is_boolean();
  if (type == "null") return v.is_null();
  if (type == "integer") return v.is_number_integer();
  if (type == "number") return v.is_number();
  return false;
}

const std::regex& cached_regex(const std::string& pattern) {
  static std::mutex mu;
  static std::map<std::string, std::regex> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(pattern);
  if (it == cache.end()) it = cache.emplace(pattern, std::regex(pattern)).first;
  return it->second;
}

class Validator {
 public:
  explicit Validator(const Json& root) : root_(&root) {}

  void check(const Json& v, const Json& s, const std::string& path) {
    if (s.is_boolean()) {
      if (!s.get<bool>()) fail(path, "no value allowed here");
      return;
    }
    if (const auto ref = s.find("$ref"); ref != s.end()) {
      const auto [root, target] = resolve(ref->get<std::string>());
      const Json* saved = root_;
      root_ = root;
      check(v, *target, path);
      root_ = saved;
      return;
    }
    if (const auto any = s.find("anyOf"); any != s.end()) {
      bool ok = false;
      for (const auto& option : *any) {
        Validator probe(*root_);
        probe.check(v, option, path);
        if (probe.errors_.empty()) {
          ok = true;
          break;
        }
      }
      if (!ok) fail(path, "matches none of the allowed forms");
    }
    if (const auto type = s.find("type"); type != s.end()) {
      bool ok = false;
      if (type->is_array()) {
        for (const auto& t : *type) ok = ok || type_matches(v, t.get<std::string>());
      } else {
        ok = type_matches(v, type->get<std::string>());
      }
      if (!ok) {
        fail(path, "expected type " + type->dump());
        return;
      }
    }
    if (const auto e = s.find("enum"); e != s.end()) {
      bool found = false;
      for (const auto& option : *e) found = found || option == v;
      if (!found) fail(path, "value not in " + e->dump());
    }
    if (const auto c = s.find("const"); c != s.end() && *c != v) {
      fail(path, "expected " + c->dump());
    }
    if (v.is_number()) {
      const double x = v.get<double>();
      if (const auto m = s.find("minimum"); m != s.end() && x < m->get<double>()) {
        fail(path, "below minimum " + m->dump());
      }
      if (const auto m = s.find("maximum"); m != s.end() && x > m->get<double>()) {
        fail(path, "above maximum " + m->dump());
      }
    }
    if (v.is_string()) {
      const auto& text = v.get_ref<const std::string&>();
      if (const auto m = s.find("minLength"); m != s.end() && text.size() < m->get<std::size_t>()) {
        fail(path, "shorter than " + m->dump());
      }
      if (const auto p = s.find("pattern"); p != s.end() &&
          !std::regex_search(text, cached_regex(p->get<std::string>()))) {
        fail(path, "does not match pattern " + p->dump());
      }
    }
    if (v.is_array()) {
      if (const auto m = s.find("minItems"); m != s.end() && v.size() < m->get<std::size_t>()) {
        fail(path, "fewer than " + m->dump() + " items");
      }
      if (const auto m = s.find("maxItems"); m != s.end() && v.size() > m->get<std::size_t>()) {
        fail(path, "more than " + m->dump() + " items");
      }
      if (const auto items = s.find("items"); items != s.end()) {
        for (std::size_t i = 0; i < v.size(); ++i) {
          check(v[i], *items, path + "/" + std::to_string(i));
        }
      }
    }
    if (v.is_object()) check_object(v, s, path);
  }

  std::vector<std::string> errors_;

 private:
  void check_object(const Json& v, const Json& s, const std::string& path) {
    if (const auto req = s.find("required"); req != s.end()) {
      for (const auto& key : *req) {
        if (!v.contains(key.get<std::string>())) {
          fail(path, "missing required property '" + key.get<std::string>() + "'");
        }
      }
    }
    const auto props = s.find("properties");
    const auto additional = s.find("additionalProperties");
    for (const auto& [key, value] : v.items()) {
      const auto child = path + "/" + key;
      if (props != s.end() && props->contains(key)) {
        check(value, (*props)[key], child);
      } else if (additional != s.end()) {
        check(value, *additional, child);
      }
    }
  }

  // "#/$defs/x", "other.schema.json" or "other.schema.json#/$defs/x".
  std::pair<const Json*, const Json*> resolve(const std::string& ref) {
    static constexpr std::string_view kSuffix = ".schema.json";
    static constexpr std::string_view kDefs = "#/$defs/";
    const auto hash = ref.find('#');
    const auto file = ref.substr(0, hash);
    const Json* root = root_;
    if (!file.empty()) {
      WXBITS_REQUIRE(file.size() > kSuffix.size() &&
                         file.compare(file.size() - kSuffix.size(), kSuffix.size(),
                                      kSuffix) == 0,
                     ErrorCode::Internal, "unsupported schema reference " + ref);
      root = &schema(file.substr(0, file.size() - kSuffix.size()));
    }
    if (hash == std::string::npos) return {root, root};
    const auto fragment = ref.substr(hash);
    WXBITS_REQUIRE(fragment.rfind(kDefs, 0) == 0, ErrorCode::Internal,
                   "unsupported schema reference " + ref);
    return {root, &root->at("$defs").at(fragment.substr(kDefs.size()))};
  }

  void fail(const std::string& path, const std::string& message) {
    errors_.push_back((path.empty() ? "/" : path) + ": " + message);
  }

  const Json* root_;
};

}  // namespace

std::vector<std::string> schema_names() {
  std::vector<std::string> names;
  for (const auto& [name, s] : registry()) names.push_back(name);
  return names;
}

const Json& schema(std::string_view name) {
  const auto it = registry().find(name);
  WXBITS_REQUIRE(it != registry().end(), ErrorCode::ValidationError,
                 "unknown schema '" + std::string(name) + "'");
  return it->second;
}

std::vector<std::string> schema_errors(const Json& document, const Json& schema) {
  Validator v(schema);
  v.check(document, schema, "");
  return v.errors_;
}

void validate_against(const Json& document, std::string_view schema_name) {
  const auto errors = schema_errors(document, schema(schema_name));
  if (errors.empty()) return;
  std::string message = std::string(schema_name) + " failed validation: ";
  for (std::size_t i = 0; i < errors.size() && i < 5; ++i) {
    if (i > 0) message += "; ";
    message += errors[i];
  }
  throw Error(ErrorCode::ValidationError, message);
}

}  // namespace wxbits
