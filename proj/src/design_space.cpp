#include "boah/design_space.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "boah/error.hpp"

namespace boah {

std::string_view to_string(HpKind kind) noexcept {
  switch (kind) {
    case HpKind::continuous: return "continuous";
    case HpKind::integer: return "integer";
    case HpKind::ordinal: return "ordinal";
    case HpKind::categorical: return "categorical";
  }
  return "unknown";
}

std::string_view to_string(ViolationRule rule) noexcept {
  switch (rule) {
    case ViolationRule::BoundViolation: return "BoundViolation";
    case ViolationRule::IntegralityViolation: return "IntegralityViolation";
    case ViolationRule::ActivityViolation: return "ActivityViolation";
    case ViolationRule::DimensionViolation: return "DimensionViolation";
  }
  return "unknown";
}

Hyperparameter Hyperparameter::continuous(std::string name, double lower, double upper, double default_value,
                                          bool log_scale) {
  return {std::move(name), HpKind::continuous, lower, upper, log_scale, {}, default_value};
}

Hyperparameter Hyperparameter::integer(std::string name, double lower, double upper, double default_value,
                                       bool log_scale) {
  return {std::move(name), HpKind::integer, lower, upper, log_scale, {}, default_value};
}

Hyperparameter Hyperparameter::categorical(std::string name, std::vector<std::string> choices,
                                           std::string default_value) {
  return {std::move(name), HpKind::categorical, 0.0, 0.0, false, std::move(choices), std::move(default_value)};
}

Hyperparameter Hyperparameter::ordinal(std::string name, std::vector<std::string> choices,
                                       std::string default_value) {
  return {std::move(name), HpKind::ordinal, 0.0, 0.0, false, std::move(choices), std::move(default_value)};
}

std::vector<bool> Configuration::active_mask() const {
  std::vector<bool> mask(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) mask[i] = values_[i].has_value();
  return mask;
}

namespace {

bool is_integral(double v) { return std::isfinite(v) && v == std::round(v); }

void validate_hyperparameter(const Hyperparameter& hp) {
  if (hp.name.empty()) throw Error(ErrorKind::IllegalBounds, "hyperparameter with empty name");
  if (hp.is_numeric()) {
    if (!std::isfinite(hp.lower) || !std::isfinite(hp.upper))
      throw Error(ErrorKind::IllegalBounds, hp.name + ": bounds must be finite");
    if (hp.kind == HpKind::continuous && !(hp.lower < hp.upper))
      throw Error(ErrorKind::IllegalBounds, hp.name + ": lower must be < upper");
    if (hp.kind == HpKind::integer) {
      if (!(hp.lower <= hp.upper)) throw Error(ErrorKind::IllegalBounds, hp.name + ": lower must be <= upper");
      if (!is_integral(hp.lower) || !is_integral(hp.upper))
        throw Error(ErrorKind::IllegalBounds, hp.name + ": integer bounds must be integral");
    }
    if (hp.log_scale && !(hp.lower > 0.0))
      throw Error(ErrorKind::IllegalBounds, hp.name + ": log scale requires lower > 0");
    if (!hp.choices.empty()) throw Error(ErrorKind::IllegalBounds, hp.name + ": numeric hyperparameter with choices");
    const auto* d = std::get_if<double>(&hp.default_value);
    if (d == nullptr || !(*d >= hp.lower && *d <= hp.upper) || (hp.kind == HpKind::integer && !is_integral(*d)))
      throw Error(ErrorKind::IllegalBounds, hp.name + ": default outside bounds");
  } else {
    if (hp.choices.empty()) throw Error(ErrorKind::IllegalBounds, hp.name + ": empty choice list");
    std::unordered_set<std::string> seen;
    for (const auto& c : hp.choices)
      if (!seen.insert(c).second) throw Error(ErrorKind::IllegalBounds, hp.name + ": duplicate choice '" + c + "'");
    if (hp.log_scale) throw Error(ErrorKind::IllegalBounds, hp.name + ": log scale on a choice hyperparameter");
    const auto* s = std::get_if<std::string>(&hp.default_value);
    if (s == nullptr || !seen.contains(*s)) throw Error(ErrorKind::IllegalBounds, hp.name + ": default not a choice");
  }
}

}  // namespace

DesignSpace DesignSpace::build(std::vector<Hyperparameter> hyperparameters, std::vector<Condition> conditions) {
  DesignSpace space;
  const std::size_t d = hyperparameters.size();
  std::unordered_set<std::string> names;
  for (const auto& hp : hyperparameters) {
    if (!names.insert(hp.name).second) throw Error(ErrorKind::DuplicateName, "'" + hp.name + "' declared twice");
    validate_hyperparameter(hp);
  }
  space.hps_ = std::move(hyperparameters);
  space.cond_parent_.assign(d, std::nullopt);
  space.cond_values_.assign(d, {});
  space.defaults_.resize(d);
  for (std::size_t i = 0; i < d; ++i) space.defaults_[i] = space.to_internal(i, space.hps_[i].default_value);

  for (const auto& cond : conditions) {
    auto child = space.index_of(cond.child);
    auto parent = space.index_of(cond.parent);
    if (!child || !parent)
      throw Error(ErrorKind::UnknownParentOrChild, "condition " + cond.child + " <- " + cond.parent);
    if (*child == *parent) throw Error(ErrorKind::CycleInConditions, cond.child + " conditioned on itself");
    if (space.cond_parent_[*child])
      throw Error(ErrorKind::DuplicateCondition, cond.child + " has more than one condition");
    if (cond.activating_values.empty())
      throw Error(ErrorKind::IllegalActivatingValue, cond.child + ": empty activating value set");
    std::vector<double> internal;
    for (const auto& v : cond.activating_values) {
      try {
        internal.push_back(space.to_internal(*parent, v));
      } catch (const Error&) {
        throw Error(ErrorKind::IllegalActivatingValue, cond.child + ": value not legal for parent " + cond.parent);
      }
    }
    space.cond_parent_[*child] = *parent;
    space.cond_values_[*child] = std::move(internal);
  }

  // With at most one parent per node, a cycle exists iff some parent chain
  // is longer than d.
  std::vector<std::size_t> depth(d, 0);
  for (std::size_t i = 0; i < d; ++i) {
    std::size_t steps = 0;
    for (auto p = space.cond_parent_[i]; p; p = space.cond_parent_[*p]) {
      if (++steps > d) throw Error(ErrorKind::CycleInConditions, "cycle through '" + space.hps_[i].name + "'");
    }
    depth[i] = steps;
  }
  space.topo_.resize(d);
  for (std::size_t i = 0; i < d; ++i) space.topo_[i] = i;
  std::stable_sort(space.topo_.begin(), space.topo_.end(),
                   [&](std::size_t a, std::size_t b) { return depth[a] < depth[b]; });
  space.conditions_ = std::move(conditions);
  return space;
}

std::optional<std::size_t> DesignSpace::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < hps_.size(); ++i)
    if (hps_[i].name == name) return i;
  return std::nullopt;
}

double DesignSpace::to_internal(std::size_t i, const NativeValue& v) const {
  const auto& hp = hps_.at(i);
  if (hp.is_numeric()) {
    const auto* d = std::get_if<double>(&v);
    if (d == nullptr || !in_domain(i, *d)) throw Error(ErrorKind::ValueOutOfBounds, hp.name + ": illegal value");
    return *d;
  }
  const auto* s = std::get_if<std::string>(&v);
  if (s != nullptr) {
    auto it = std::find(hp.choices.begin(), hp.choices.end(), *s);
    if (it != hp.choices.end()) return static_cast<double>(it - hp.choices.begin());
  }
  throw Error(ErrorKind::ValueOutOfBounds, hp.name + ": not one of the declared choices");
}

NativeValue DesignSpace::to_native(std::size_t i, double internal) const {
  const auto& hp = hps_.at(i);
  if (hp.is_numeric()) return internal;
  if (!in_domain(i, internal)) throw Error(ErrorKind::ValueOutOfBounds, hp.name + ": choice index out of range");
  return hp.choices[static_cast<std::size_t>(internal)];
}

bool DesignSpace::in_domain(std::size_t i, double v) const {
  const auto& hp = hps_[i];
  if (!std::isfinite(v)) return false;
  switch (hp.kind) {
    case HpKind::continuous: return v >= hp.lower && v <= hp.upper;
    case HpKind::integer: return v >= hp.lower && v <= hp.upper && is_integral(v);
    case HpKind::ordinal:
    case HpKind::categorical: return is_integral(v) && v >= 0.0 && v < static_cast<double>(hp.choices.size());
  }
  return false;
}

double DesignSpace::encode(std::size_t i, double v) const {
  const auto& hp = hps_.at(i);
  switch (hp.kind) {
    case HpKind::continuous:
      if (hp.log_scale) return (std::log(v) - std::log(hp.lower)) / (std::log(hp.upper) - std::log(hp.lower));
      return (v - hp.lower) / (hp.upper - hp.lower);
    case HpKind::integer: {
      const double a = hp.lower - 0.5;
      const double b = hp.upper + 0.5;
      if (hp.log_scale) return (std::log(v) - std::log(a)) / (std::log(b) - std::log(a));
      return (v - a) / (b - a);
    }
    case HpKind::ordinal:
    case HpKind::categorical: return (v + 0.5) / static_cast<double>(hp.choices.size());
  }
  return 0.0;
}

double DesignSpace::decode(std::size_t i, double u) const {
  const auto& hp = hps_.at(i);
  switch (hp.kind) {
    case HpKind::continuous: {
      double v = hp.log_scale ? std::exp(std::log(hp.lower) + u * (std::log(hp.upper) - std::log(hp.lower)))
                              : hp.lower + u * (hp.upper - hp.lower);
      return std::clamp(v, hp.lower, hp.upper);
    }
    case HpKind::integer: {
      const double a = hp.lower - 0.5;
      const double b = hp.upper + 0.5;
      double v = hp.log_scale ? std::exp(std::log(a) + u * (std::log(b) - std::log(a))) : a + u * (b - a);
      return std::clamp(std::round(v), hp.lower, hp.upper);
    }
    case HpKind::ordinal:
    case HpKind::categorical: {
      const double k = static_cast<double>(hp.choices.size());
      return std::min(std::floor(u * k), k - 1.0);
    }
  }
  return 0.0;
}

bool DesignSpace::condition_satisfied(std::size_t i, const Configuration& c) const {
  const auto& parent = cond_parent_[i];
  if (!parent) return true;
  const auto& pv = c[*parent];
  if (!pv) return false;
  const auto& acts = cond_values_[i];
  return std::find(acts.begin(), acts.end(), *pv) != acts.end();
}

Configuration DesignSpace::sample(std::mt19937_64& rng) const {
  Configuration c(std::vector<std::optional<double>>(hps_.size()));
  for (std::size_t i : topo_) {
    if (!condition_satisfied(i, c)) continue;
    const auto& hp = hps_[i];
    double v = 0.0;
    switch (hp.kind) {
      case HpKind::continuous:
        if (hp.log_scale) {
          std::uniform_real_distribution<double> u(std::log(hp.lower), std::log(hp.upper));
          v = std::clamp(std::exp(u(rng)), hp.lower, hp.upper);
        } else {
          v = std::uniform_real_distribution<double>(hp.lower, hp.upper)(rng);
        }
        break;
      case HpKind::integer:
        if (hp.log_scale) {
          std::uniform_real_distribution<double> u(std::log(hp.lower - 0.5), std::log(hp.upper + 0.5));
          v = std::clamp(std::round(std::exp(u(rng))), hp.lower, hp.upper);
        } else {
          std::uniform_int_distribution<long long> u(static_cast<long long>(hp.lower),
                                                     static_cast<long long>(hp.upper));
          v = static_cast<double>(u(rng));
        }
        break;
      case HpKind::ordinal:
      case HpKind::categorical: {
        std::uniform_int_distribution<std::size_t> u(0, hp.choices.size() - 1);
        v = static_cast<double>(u(rng));
        break;
      }
    }
    c[i] = v;
  }
  return c;
}

Configuration DesignSpace::with_activity_recomputed(Configuration config, const Configuration& fill) const {
  for (std::size_t i : topo_) {
    if (!condition_satisfied(i, config)) {
      config[i].reset();
    } else if (!config[i]) {
      config[i] = fill[i];
    }
  }
  return config;
}

Configuration DesignSpace::default_configuration() const {
  std::vector<std::optional<double>> values(defaults_.begin(), defaults_.end());
  Configuration all(values);
  return with_activity_recomputed(all, all);
}

UnitEncoding DesignSpace::to_unit_vector(const Configuration& config) const {
  if (config.size() != hps_.size())
    throw Error(ErrorKind::WrongDimension, "configuration has " + std::to_string(config.size()) + " entries, space " +
                                               std::to_string(hps_.size()));
  UnitEncoding out{std::vector<double>(hps_.size()), std::vector<bool>(hps_.size())};
  for (std::size_t i = 0; i < hps_.size(); ++i) {
    if (const auto& v = config[i]) {
      if (!in_domain(i, *v)) throw Error(ErrorKind::ValueOutOfBounds, hps_[i].name);
      out.vector[i] = encode(i, *v);
      out.active[i] = true;
    } else {
      out.vector[i] = encode(i, defaults_[i]);
    }
  }
  return out;
}

Configuration DesignSpace::from_unit_vector(std::span<const double> unit) const {
  if (unit.size() != hps_.size())
    throw Error(ErrorKind::WrongDimension,
                "vector has " + std::to_string(unit.size()) + " entries, space " + std::to_string(hps_.size()));
  std::vector<std::optional<double>> values(hps_.size());
  for (std::size_t i = 0; i < hps_.size(); ++i) {
    if (!(unit[i] >= 0.0 && unit[i] <= 1.0))
      throw Error(ErrorKind::ComponentOutOfRange, hps_[i].name + ": component outside [0,1]");
    values[i] = decode(i, unit[i]);
  }
  Configuration decoded(values);
  return with_activity_recomputed(decoded, decoded);
}

std::vector<Violation> DesignSpace::check_validity(const Configuration& config) const {
  std::vector<Violation> out;
  if (config.size() != hps_.size()) {
    out.push_back({"", ViolationRule::DimensionViolation, "configuration dimension does not match space"});
    return out;
  }
  for (std::size_t i : topo_) {
    const auto& hp = hps_[i];
    const bool should_be_active = condition_satisfied(i, config);
    const auto& v = config[i];
    if (should_be_active && !v) {
      out.push_back({hp.name, ViolationRule::ActivityViolation, "inactive although its condition holds"});
      continue;
    }
    if (!should_be_active && v) {
      out.push_back({hp.name, ViolationRule::ActivityViolation, "active although its condition does not hold"});
      continue;
    }
    if (!v) continue;
    if (hp.kind == HpKind::integer && std::isfinite(*v) && !is_integral(*v)) {
      out.push_back({hp.name, ViolationRule::IntegralityViolation, "non-integral value"});
    } else if (!in_domain(i, *v)) {
      out.push_back({hp.name, ViolationRule::BoundViolation, "value outside its bounds or choices"});
    }
  }
  return out;
}

}  // namespace boah
