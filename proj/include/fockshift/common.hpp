#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace fockshift {

using cplx = std::complex<double>;

/// Invalid input: a letter outside the alphabet, a malformed word, an
/// out-of-range depth, a schema violation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A mathematical precondition of an operation does not hold. The message
/// carries the certificate (e.g. a divergence witness).
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fockshift
