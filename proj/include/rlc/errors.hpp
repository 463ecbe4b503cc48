#pragma once

#include <stdexcept>
#include <string>

namespace rlc {

/// Malformed arguments: negative masses, parameters out of range, empty inputs.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A theorem's hypothesis is not met, so the requested bound does not apply.
class NotApplicable : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// nu charges an index that mu does not; relative log-concavity is undefined.
class AbsoluteContinuityError : public NotApplicable {
 public:
  AbsoluteContinuityError(const std::string& what, long long index)
      : NotApplicable(what), index_(index) {}
  long long index() const noexcept { return index_; }

 private:
  long long index_;
};

/// A set system that fails the hereditary or exchange axiom.
class MatroidAxiomError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

}  // namespace rlc
