#pragma once

#include <stdexcept>
#include <string>

namespace geninv {

enum class ErrorKind {
  input,      // malformed data, dimension mismatch
  existence,  // the requested inverse/projector does not exist at the tolerance
  kernel,     // factorization failure
};

/// Exception carrying the failed condition and a numerical margin.
///
/// `clause` names the violated existence condition (e.g. "R(A·T) ⊕ S ≠ Y")
/// and `margin` is the singular-value gap that decided it, when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::string clause = {},
        double margin = 0.0)
      : std::runtime_error(message),
        kind_(kind),
        clause_(std::move(clause)),
        margin_(margin) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& clause() const noexcept { return clause_; }
  double margin() const noexcept { return margin_; }

 private:
  ErrorKind kind_;
  std::string clause_;
  double margin_;
};

inline Error input_error(const std::string& message) {
  return Error(ErrorKind::input, message);
}

}  // namespace geninv
