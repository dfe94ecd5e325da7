#pragma once

#include <functional>
#include <optional>
#include <string>

#include "boah/design_space.hpp"
#include "boah/error.hpp"
#include "doctest.h"

namespace boah::test {

/// Kind of the boah::Error thrown by `f`, or empty if none was thrown.
inline std::optional<ErrorKind> thrown_kind(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

/// kernel in {rbf, linear}; gamma log-continuous [1e-5, 10], active iff kernel = rbf.
inline DesignSpace rbf_space(const std::string& kernel_default = "rbf") {
  return DesignSpace::build(
      {Hyperparameter::categorical("kernel", {"rbf", "linear"}, kernel_default),
       Hyperparameter::continuous("gamma", 1e-5, 10.0, 0.1, true)},
      {{"gamma", "kernel", {std::string("rbf")}}});
}

}  // namespace boah::test

#define CHECK_THROWS_KIND(expr, kind_) \
  CHECK(::boah::test::thrown_kind([&] { (void)(expr); }) == std::optional<::boah::ErrorKind>(kind_))
