#pragma once

#include <stdexcept>
#include <string>

namespace bnsense {

// Base of every error raised by the library. The CLI maps the concrete
// subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed network document: schema, cycle, row sum or arity problems.
class NetworkError : public Error {
 public:
  using Error::Error;
};

// p(e) = 0, or a finding combination with no positive entry.
class ImpossibleEvidence : public Error {
 public:
  using Error::Error;
};

// Degenerate, dependent or otherwise unusable parameters; undefined
// sensitivity-function points; rank failures in the n-way solver.
class AnalysisError : public Error {
 public:
  using Error::Error;
};

// A positive quantity divided by zero during message passing or reweighting.
class InconsistentPotential : public Error {
 public:
  using Error::Error;
};

// Bad command line or malformed textual argument (evidence, parameter, target).
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace bnsense
