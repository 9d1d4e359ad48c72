#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cslcg {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands built over different alphabets or of different set kinds.
class MismatchError : public Error {
 public:
  using Error::Error;
};

/// Malformed regular expression, word, objective or model text.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t position)
      : Error(what + " (at offset " + std::to_string(position) + ")"), message_(what), position_(position) {}
  std::size_t position() const { return position_; }
  /// The message without the position suffix.
  const std::string& message() const { return message_; }

 private:
  std::string message_;
  std::size_t position_;
};

/// An objective or query outside the decidable fragment handled by the solvers.
class FragmentError : public Error {
 public:
  using Error::Error;
};

/// Structural problem in an arena or model file.
class ModelError : public Error {
 public:
  using Error::Error;
};

}  // namespace cslcg
