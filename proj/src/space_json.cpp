#include "boah/space_json.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "boah/error.hpp"

namespace boah {

namespace {

using json = nlohmann::json;

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorKind::InvalidSpaceJson, msg); }

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, _] : obj.items())
    if (!allowed.contains(key)) bad(where + ": unknown key '" + key + "'");
}

double number_field(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) bad(where + ": missing '" + key + "'");
  if (!obj[key].is_number()) bad(where + ": '" + key + "' must be a number");
  return obj[key].get<double>();
}

HpKind parse_kind(const std::string& s, const std::string& where) {
  if (s == "continuous") return HpKind::continuous;
  if (s == "integer") return HpKind::integer;
  if (s == "ordinal") return HpKind::ordinal;
  if (s == "categorical") return HpKind::categorical;
  bad(where + ": unknown type '" + s + "'");
}

Hyperparameter parse_hyperparameter(const json& obj, std::size_t index) {
  std::string where = "hyperparameters[" + std::to_string(index) + "]";
  if (!obj.is_object()) bad(where + ": expected an object");
  reject_unknown_keys(obj, {"name", "type", "lower", "upper", "log", "choices", "default"}, where);
  if (!obj.contains("name") || !obj["name"].is_string()) bad(where + ": 'name' must be a string");
  if (!obj.contains("type") || !obj["type"].is_string()) bad(where + ": 'type' must be a string");
  Hyperparameter hp;
  hp.name = obj["name"].get<std::string>();
  where += " (" + hp.name + ")";
  hp.kind = parse_kind(obj["type"].get<std::string>(), where);
  if (hp.is_numeric()) {
    if (obj.contains("choices")) bad(where + ": 'choices' not allowed for numeric types");
    hp.lower = number_field(obj, "lower", where);
    hp.upper = number_field(obj, "upper", where);
    if (obj.contains("log")) {
      if (!obj["log"].is_boolean()) bad(where + ": 'log' must be a boolean");
      hp.log_scale = obj["log"].get<bool>();
    }
    if (obj.contains("default")) {
      hp.default_value = number_field(obj, "default", where);
    } else {
      double mid = hp.log_scale && hp.lower > 0 ? std::sqrt(hp.lower * hp.upper) : 0.5 * (hp.lower + hp.upper);
      if (hp.kind == HpKind::integer) mid = std::round(mid);
      hp.default_value = mid;
    }
  } else {
    for (const char* key : {"lower", "upper", "log"})
      if (obj.contains(key)) bad(where + ": '" + key + "' not allowed for choice types");
    if (!obj.contains("choices") || !obj["choices"].is_array()) bad(where + ": 'choices' must be an array");
    for (const auto& c : obj["choices"]) {
      if (!c.is_string() && !c.is_number()) bad(where + ": choices must be strings or numbers");
      hp.choices.push_back(choice_label(c));
    }
    if (obj.contains("default")) {
      const auto& d = obj["default"];
      if (!d.is_string() && !d.is_number()) bad(where + ": 'default' must be a choice");
      hp.default_value = choice_label(d);
    } else {
      hp.default_value = hp.choices.empty() ? std::string{} : hp.choices.front();
    }
  }
  return hp;
}

NativeValue parse_native(const json& v, const Hyperparameter& hp, const std::string& where) {
  if (hp.is_numeric()) {
    if (!v.is_number()) throw Error(ErrorKind::IllegalActivatingValue, where + ": expected a number");
    return v.get<double>();
  }
  if (!v.is_string() && !v.is_number()) throw Error(ErrorKind::IllegalActivatingValue, where + ": expected a choice");
  return choice_label(v);
}

ordered_json native_to_json(const Hyperparameter& hp, const NativeValue& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  const double d = std::get<double>(v);
  if (hp.kind == HpKind::integer) return static_cast<long long>(d);
  return d;
}

}  // namespace

std::string choice_label(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

DesignSpace space_from_json(const json& doc) {
  if (!doc.is_object()) bad("space document must be an object");
  reject_unknown_keys(doc, {"hyperparameters", "conditions"}, "space");
  if (!doc.contains("hyperparameters") || !doc["hyperparameters"].is_array())
    bad("'hyperparameters' must be an array");
  std::vector<Hyperparameter> hps;
  std::size_t i = 0;
  for (const auto& h : doc["hyperparameters"]) hps.push_back(parse_hyperparameter(h, i++));

  std::vector<Condition> conditions;
  if (doc.contains("conditions")) {
    if (!doc["conditions"].is_array()) bad("'conditions' must be an array");
    std::size_t ci = 0;
    for (const auto& c : doc["conditions"]) {
      std::string where = "conditions[" + std::to_string(ci++) + "]";
      if (!c.is_object()) bad(where + ": expected an object");
      reject_unknown_keys(c, {"child", "parent", "values"}, where);
      if (!c.contains("child") || !c["child"].is_string()) bad(where + ": 'child' must be a string");
      if (!c.contains("parent") || !c["parent"].is_string()) bad(where + ": 'parent' must be a string");
      if (!c.contains("values") || !c["values"].is_array()) bad(where + ": 'values' must be an array");
      Condition cond{c["child"].get<std::string>(), c["parent"].get<std::string>(), {}};
      auto parent = std::find_if(hps.begin(), hps.end(), [&](const auto& h) { return h.name == cond.parent; });
      if (parent == hps.end()) throw Error(ErrorKind::UnknownParentOrChild, where + ": unknown parent " + cond.parent);
      for (const auto& v : c["values"]) cond.activating_values.push_back(parse_native(v, *parent, where));
      conditions.push_back(std::move(cond));
    }
  }
  return DesignSpace::build(std::move(hps), std::move(conditions));
}

DesignSpace load_space_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    bad(path.string() + ": " + e.what());
  }
  return space_from_json(doc);
}

ordered_json space_to_json(const DesignSpace& space) {
  ordered_json doc;
  doc["hyperparameters"] = ordered_json::array();
  for (const auto& hp : space.hyperparameters()) {
    ordered_json h;
    h["name"] = hp.name;
    h["type"] = std::string(to_string(hp.kind));
    if (hp.is_numeric()) {
      if (hp.kind == HpKind::integer) {
        h["lower"] = static_cast<long long>(hp.lower);
        h["upper"] = static_cast<long long>(hp.upper);
      } else {
        h["lower"] = hp.lower;
        h["upper"] = hp.upper;
      }
      h["log"] = hp.log_scale;
    } else {
      h["choices"] = hp.choices;
    }
    h["default"] = native_to_json(hp, hp.default_value);
    doc["hyperparameters"].push_back(std::move(h));
  }
  doc["conditions"] = ordered_json::array();
  for (const auto& c : space.conditions()) {
    const auto& parent = space.hyperparameter(*space.index_of(c.parent));
    ordered_json values = ordered_json::array();
    for (const auto& v : c.activating_values) values.push_back(native_to_json(parent, v));
    doc["conditions"].push_back({{"child", c.child}, {"parent", c.parent}, {"values", values}});
  }
  return doc;
}

std::string space_digest(const DesignSpace& space) {
  const std::string text = space_to_json(space).dump();
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr);
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xF]);
  }
  return out;
}

ordered_json config_values_to_json(const DesignSpace& space, const Configuration& config) {
  ordered_json out = ordered_json::object();
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    const auto& hp = space.hyperparameter(i);
    if (const auto& v = config[i]) {
      out[hp.name] = native_to_json(hp, space.to_native(i, *v));
    } else {
      out[hp.name] = nullptr;
    }
  }
  return out;
}

ordered_json config_active_to_json(const DesignSpace& space, const Configuration& config) {
  ordered_json out = ordered_json::object();
  for (std::size_t i = 0; i < space.dimension(); ++i) out[space.hyperparameter(i).name] = config.active(i);
  return out;
}

Configuration config_from_json(const DesignSpace& space, const json& values) {
  if (!values.is_object()) throw Error(ErrorKind::InvalidConfiguration, "configuration must be an object");
  std::vector<std::optional<double>> out(space.dimension());
  std::vector<bool> seen(space.dimension(), false);
  for (const auto& [key, v] : values.items()) {
    auto idx = space.index_of(key);
    if (!idx) throw Error(ErrorKind::InvalidConfiguration, "unknown hyperparameter '" + key + "'");
    seen[*idx] = true;
    if (v.is_null()) continue;
    const auto& hp = space.hyperparameter(*idx);
    try {
      if (hp.is_numeric()) {
        if (!v.is_number()) throw Error(ErrorKind::InvalidConfiguration, key + ": expected a number");
        out[*idx] = space.to_internal(*idx, v.get<double>());
      } else {
        if (!v.is_string() && !v.is_number()) throw Error(ErrorKind::InvalidConfiguration, key + ": expected a choice");
        out[*idx] = space.to_internal(*idx, choice_label(v));
      }
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::InvalidConfiguration) throw;
      throw Error(ErrorKind::InvalidConfiguration, key + ": " + e.what());
    }
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i]) throw Error(ErrorKind::InvalidConfiguration, "missing hyperparameter '" + space.hyperparameter(i).name + "'");
  return Configuration(std::move(out));
}

}  // namespace boah
