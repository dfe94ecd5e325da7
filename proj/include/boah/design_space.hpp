#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace boah {

enum class HpKind { continuous, integer, ordinal, categorical };

std::string_view to_string(HpKind kind) noexcept;

/// A value as a user writes it: a number for continuous/integer
/// hyperparameters, a choice label for categorical/ordinal ones.
using NativeValue = std::variant<double, std::string>;

struct Hyperparameter {
  std::string name;
  HpKind kind = HpKind::continuous;
  double lower = 0.0;
  double upper = 1.0;
  bool log_scale = false;
  std::vector<std::string> choices;
  NativeValue default_value = 0.0;

  bool is_numeric() const noexcept { return kind == HpKind::continuous || kind == HpKind::integer; }
  bool is_choice() const noexcept { return !is_numeric(); }
  std::size_t num_choices() const noexcept { return choices.size(); }

  static Hyperparameter continuous(std::string name, double lower, double upper, double default_value,
                                   bool log_scale = false);
  static Hyperparameter integer(std::string name, double lower, double upper, double default_value,
                                bool log_scale = false);
  static Hyperparameter categorical(std::string name, std::vector<std::string> choices,
                                    std::string default_value);
  static Hyperparameter ordinal(std::string name, std::vector<std::string> choices, std::string default_value);
};

/// `child` is active iff `parent` is active and takes one of `activating_values`.
struct Condition {
  std::string child;
  std::string parent;
  std::vector<NativeValue> activating_values;
};

/// One point of a design space. Numeric hyperparameters hold their native
/// value, choice hyperparameters hold the choice index. An empty slot is the
/// INACTIVE marker, so the activity mask cannot disagree with the values.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(std::vector<std::optional<double>> values) : values_(std::move(values)) {}

  std::size_t size() const noexcept { return values_.size(); }
  bool active(std::size_t i) const { return values_.at(i).has_value(); }
  const std::optional<double>& operator[](std::size_t i) const { return values_.at(i); }
  std::optional<double>& operator[](std::size_t i) { return values_.at(i); }
  const std::vector<std::optional<double>>& values() const noexcept { return values_; }
  std::vector<bool> active_mask() const;

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  std::vector<std::optional<double>> values_;
};

struct UnitEncoding {
  std::vector<double> vector;
  std::vector<bool> active;
};

enum class ViolationRule { BoundViolation, IntegralityViolation, ActivityViolation, DimensionViolation };

std::string_view to_string(ViolationRule rule) noexcept;

struct Violation {
  std::string hyperparameter;
  ViolationRule rule;
  std::string detail;
};

class DesignSpace {
 public:
  /// Validates and freezes a space. Hyperparameters keep declaration order.
  static DesignSpace build(std::vector<Hyperparameter> hyperparameters, std::vector<Condition> conditions);

  std::size_t dimension() const noexcept { return hps_.size(); }
  const std::vector<Hyperparameter>& hyperparameters() const noexcept { return hps_; }
  const Hyperparameter& hyperparameter(std::size_t i) const { return hps_.at(i); }
  const std::vector<Condition>& conditions() const noexcept { return conditions_; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  /// Index of the controlling parent, if `i` is conditional.
  std::optional<std::size_t> parent_of(std::size_t i) const { return cond_parent_.at(i); }
  /// Parent values (internal representation) that activate `i`.
  const std::vector<double>& activating_values(std::size_t i) const { return cond_values_.at(i); }
  /// Parents precede their children.
  const std::vector<std::size_t>& topological_order() const noexcept { return topo_; }

  /// Internal representation of a native value (choice label -> index).
  double to_internal(std::size_t i, const NativeValue& v) const;
  NativeValue to_native(std::size_t i, double internal) const;
  double default_internal(std::size_t i) const { return defaults_.at(i); }

  /// Encoding of a single internal value into [0, 1].
  double encode(std::size_t i, double internal) const;
  /// Decoding from [0, 1], snapped to the nearest legal value.
  double decode(std::size_t i, double unit) const;

  Configuration sample(std::mt19937_64& rng) const;
  Configuration default_configuration() const;
  UnitEncoding to_unit_vector(const Configuration& config) const;
  Configuration from_unit_vector(std::span<const double> unit) const;
  std::vector<Violation> check_validity(const Configuration& config) const;

  /// Clears every value whose condition is not satisfied and returns the
  /// result. Values needed by newly active children are taken from `fill`.
  Configuration with_activity_recomputed(Configuration config, const Configuration& fill) const;

 private:
  DesignSpace() = default;
  bool condition_satisfied(std::size_t i, const Configuration& c) const;
  bool in_domain(std::size_t i, double internal) const;

  std::vector<Hyperparameter> hps_;
  std::vector<Condition> conditions_;
  std::vector<std::optional<std::size_t>> cond_parent_;
  std::vector<std::vector<double>> cond_values_;
  std::vector<double> defaults_;
  std::vector<std::size_t> topo_;
};

// Free-function spellings of the space operations.
inline DesignSpace build_space(std::vector<Hyperparameter> hps, std::vector<Condition> conditions) {
  return DesignSpace::build(std::move(hps), std::move(conditions));
}
inline Configuration sample_configuration(const DesignSpace& space, std::mt19937_64& rng) {
  return space.sample(rng);
}
inline Configuration default_configuration(const DesignSpace& space) { return space.default_configuration(); }
inline UnitEncoding to_unit_vector(const DesignSpace& space, const Configuration& c) {
  return space.to_unit_vector(c);
}
inline Configuration from_unit_vector(const DesignSpace& space, std::span<const double> v) {
  return space.from_unit_vector(v);
}
inline std::vector<Violation> check_validity(const DesignSpace& space, const Configuration& c) {
  return space.check_validity(c);
}

}  // namespace boah
