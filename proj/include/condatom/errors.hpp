/*
 * Copyright 2026 The condatom Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace condatom {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value failed one of its type invariants at construction time.
/// The message names the invariant, e.g. "fiber weights sum to 7/8, expected 1".
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// Two objects that must share a shape (fiber count, cell grid) do not.
class StructuralMismatch : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its documented domain.
class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

/// A strict interior mass target was requested on a slice carrying a point mass.
class AtomObstruction : public Error {
 public:
  AtomObstruction(std::size_t fiber, std::string location)
      : Error("atom obstruction on fiber " + std::to_string(fiber) + " at location " + location),
        fiber_(fiber),
        location_(std::move(location)) {}

  std::size_t fiber() const noexcept { return fiber_; }
  const std::string& location() const noexcept { return location_; }

 private:
  std::size_t fiber_;
  std::string location_;
};

/// Malformed scenario text. Line and column are 1-based; 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(line == 0 ? what
                        : what + " (line " + std::to_string(line) + ", column " +
                              std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace condatom
