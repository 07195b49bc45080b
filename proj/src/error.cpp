#include "tdg/error.hpp"

namespace tdg {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DegreeOverflow: return "DegreeOverflow";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::InvalidDomain: return "InvalidDomain";
    case ErrorKind::InvalidBoundarySpec: return "InvalidBoundarySpec";
    case ErrorKind::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorKind::UnknownEntity: return "UnknownEntity";
    case ErrorKind::MissingBoundaryData: return "MissingBoundaryData";
    case ErrorKind::DegreeMismatch: return "DegreeMismatch";
    case ErrorKind::SingularBlock: return "SingularBlock";
    case ErrorKind::TimeNotOnSlabBoundary: return "TimeNotOnSlabBoundary";
    case ErrorKind::NonMonotoneH: return "NonMonotoneH";
    case ErrorKind::UnknownCase: return "UnknownCase";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace tdg
