#pragma once

#include <stdexcept>
#include <string>

namespace qcorr {

/// Raised when an argument violates an operation's documented precondition
/// (bad index set, dimension mismatch, malformed tree, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The support of one operator is not contained in the support of another,
/// so the requested relative entropy is not finite.
class SupportError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A verifier was handed input that does not satisfy the hypothesis of the
/// statement it checks. Distinct from a failed report.
class PremiseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed state, mixture or report document.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qcorr
