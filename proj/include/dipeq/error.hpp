// Copyright 2026 The dipeq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DIPEQ_ERROR_HPP
#define DIPEQ_ERROR_HPP

#include <stdexcept>
#include <string>

namespace dipeq {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A text document (map, state, case, table) failed to parse. Carries the
// 1-based line and column of the offending token.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " +
              message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// A structurally valid document violates a semantic invariant.
class InvariantError : public Error {
 public:
  using Error::Error;
};

// An operation was called in a phase it does not support.
class PhaseError : public Error {
 public:
  using Error::Error;
};

class OrderParseError : public Error {
 public:
  enum class Reason { kSyntax, kUnknownProvince, kNoUnit };

  OrderParseError(Reason reason, const std::string& message)
      : Error(message), reason_(reason) {}

  Reason reason() const { return reason_; }

 private:
  Reason reason_;
};

// A joint action is not legal in the state it is evaluated against.
class IllegalActionError : public Error {
 public:
  using Error::Error;
};

}  // namespace dipeq

#endif  // DIPEQ_ERROR_HPP
