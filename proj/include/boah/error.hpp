#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace boah {

enum class ErrorKind {
  // design space
  DuplicateName,
  CycleInConditions,
  UnknownParentOrChild,
  DuplicateCondition,
  IllegalBounds,
  IllegalActivatingValue,
  ValueOutOfBounds,
  WrongDimension,
  ComponentOutOfRange,
  InvalidSpaceJson,
  // run history
  UnknownBudget,
  InvalidConfiguration,
  InvalidRecord,
  NoMaxBudgetRecord,
  SchemaViolation,
  SpaceDigestMismatch,
  // kde model
  NotEnoughObservations,
  EmptyPointSet,
  DimensionMismatch,
  ModelNotFitted,
  // scheduler
  IllegalBudgets,
  IllegalEta,
  IncompleteRung,
  // optimizer
  ObjectiveError,
  ConfigurationError,
  // analysis
  NotEnoughData,
  DimensionOutOfRange,
  InvalidIncumbent,
  SpaceMismatch,
  InvalidDistanceMatrix,
  EmptyHistory,
  // cli
  ScenarioError,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a machine-checkable kind; the
/// message text is for humans and always starts with the kind name.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace boah
