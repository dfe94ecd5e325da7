#include "boah/error.hpp"

namespace boah {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DuplicateName: return "DuplicateName";
    case ErrorKind::CycleInConditions: return "CycleInConditions";
    case ErrorKind::UnknownParentOrChild: return "UnknownParentOrChild";
    case ErrorKind::DuplicateCondition: return "DuplicateCondition";
    case ErrorKind::IllegalBounds: return "IllegalBounds";
    case ErrorKind::IllegalActivatingValue: return "IllegalActivatingValue";
    case ErrorKind::ValueOutOfBounds: return "ValueOutOfBounds";
    case ErrorKind::WrongDimension: return "WrongDimension";
    case ErrorKind::ComponentOutOfRange: return "ComponentOutOfRange";
    case ErrorKind::InvalidSpaceJson: return "InvalidSpaceJson";
    case ErrorKind::UnknownBudget: return "UnknownBudget";
    case ErrorKind::InvalidConfiguration: return "InvalidConfiguration";
    case ErrorKind::InvalidRecord: return "InvalidRecord";
    case ErrorKind::NoMaxBudgetRecord: return "NoMaxBudgetRecord";
    case ErrorKind::SchemaViolation: return "SchemaViolation";
    case ErrorKind::SpaceDigestMismatch: return "SpaceDigestMismatch";
    case ErrorKind::NotEnoughObservations: return "NotEnoughObservations";
    case ErrorKind::EmptyPointSet: return "EmptyPointSet";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ModelNotFitted: return "ModelNotFitted";
    case ErrorKind::IllegalBudgets: return "IllegalBudgets";
    case ErrorKind::IllegalEta: return "IllegalEta";
    case ErrorKind::IncompleteRung: return "IncompleteRung";
    case ErrorKind::ObjectiveError: return "ObjectiveError";
    case ErrorKind::ConfigurationError: return "ConfigurationError";
    case ErrorKind::NotEnoughData: return "NotEnoughData";
    case ErrorKind::DimensionOutOfRange: return "DimensionOutOfRange";
    case ErrorKind::InvalidIncumbent: return "InvalidIncumbent";
    case ErrorKind::SpaceMismatch: return "SpaceMismatch";
    case ErrorKind::InvalidDistanceMatrix: return "InvalidDistanceMatrix";
    case ErrorKind::EmptyHistory: return "EmptyHistory";
    case ErrorKind::ScenarioError: return "ScenarioError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace boah
