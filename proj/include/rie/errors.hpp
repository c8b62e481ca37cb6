#pragma once

#include <stdexcept>
#include <string>

namespace rie {

/// Bad caller input: shapes, non-finite values, out-of-range parameters.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Real-axis evaluation of a resolvent functional at one of its poles.
class PoleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A denominator vanished; carries the offending modulus.
class SingularError : public std::domain_error {
 public:
  SingularError(const std::string& what, double modulus)
      : std::domain_error(what), modulus_(modulus) {}
  double modulus() const noexcept { return modulus_; }

 private:
  double modulus_;
};

/// Integration window around an eigenvalue also contains a distinct eigenvalue.
class AmbiguousIntervalError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace rie
