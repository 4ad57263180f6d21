#pragma once

#include <stdexcept>
#include <string>

namespace stagsrl {

// Base of every error thrown by the library. The CLI maps each subclass to a
// distinct exit code (see docs/cli.md).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (CoNLL lines, embedding files, tag strings, configs).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input violating a data invariant (head out of range, ragged
// argument columns, misaligned label sequences).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Dependency structure is not a tree (cycle, node not reaching the root).
class StructureError : public Error {
 public:
  using Error::Error;
};

// Operand shapes incompatible with a tensor operation.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Checkpoint or report with unknown magic, version, or kind.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Filesystem problems.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace stagsrl
