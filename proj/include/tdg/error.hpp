#pragma once

#include <stdexcept>
#include <string>

namespace tdg {

enum class ErrorKind {
  NotSymmetric,
  NotPositiveDefinite,
  DimensionMismatch,
  DegreeOverflow,
  IndexOutOfRange,
  InvalidDomain,
  InvalidBoundarySpec,
  UnsupportedOrder,
  UnknownEntity,
  MissingBoundaryData,
  DegreeMismatch,
  SingularBlock,
  TimeNotOnSlabBoundary,
  NonMonotoneH,
  UnknownCase,
  InvalidArgument
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised by the slab solver; carries the 0-based slab index.
class SingularBlockError : public Error {
 public:
  SingularBlockError(int slab, const std::string& what) : Error(ErrorKind::SingularBlock, what), slab_(slab) {}
  int slab() const { return slab_; }

 private:
  int slab_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& msg) { throw Error(kind, msg); }

}  // namespace tdg
