#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hroi {

// Base class for everything this library throws on purpose.  Callers that
// only care about "hroi failed" can catch this; the subclasses exist so the
// CLI can map failures onto distinct exit codes and so tests can assert the
// precise failure mode.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Coordinate or vertex outside the governing grid/image bounds.
class BoundsError : public Error {
 public:
  using Error::Error;
};

// Hilbert index or range endpoint outside [0, 4^order).
class RangeError : public Error {
 public:
  using Error::Error;
};

// A value does not fit the representation (e.g. order outside [1, 31]).
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Degenerate or inconsistent geometry (ring with < 3 distinct vertices,
// vertex off the half-pixel lattice, geometry mismatch between inputs, ...).
class GeometryError : public Error {
 public:
  using Error::Error;
};

// Invalid argument to an operation (zero counts, empty inputs, infeasible
// synthesis parameters, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Malformed textual input.  Carries the byte offset where parsing gave up.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at byte " + std::to_string(position) + ")"),
        position_(position) {}
  explicit ParseError(const std::string& what) : Error(what), position_(0) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Structurally valid input (e.g. well-formed JSON) with the wrong shape or
// value types for the expected schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Input that cannot be represented in, or read from, a particular file
// format (bad magic, unsupported variant, holes in a holeless format, ...).
class FormatError : public Error {
 public:
  using Error::Error;
};

// An operation would create conflicting state (duplicate annotation id).
class ConflictError : public Error {
 public:
  using Error::Error;
};

// A persisted artifact failed verification on load (truncation, unsorted
// entries, catalog/entry disagreement).
class IntegrityError : public Error {
 public:
  using Error::Error;
};

}  // namespace hroi
