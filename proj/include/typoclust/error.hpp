// Copyright 2026 The typoclust Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TYPOCLUST_ERROR_HPP_
#define TYPOCLUST_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace typoclust {

// Base of every error raised by the library. The CLI maps the three
// branches below onto exit codes 1 (usage), 2 (data) and 3 (invariant).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad command line or configuration.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Input data that cannot be processed: unreadable files, malformed XML,
// empty vocabulary and the like.
class DataError : public Error {
 public:
  using Error::Error;
};

// A postcondition the library guarantees was found broken.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class IoError : public DataError {
 public:
  using DataError::DataError;
};

class MalformedXml : public DataError {
 public:
  MalformedXml(const std::string& message, std::size_t line, std::size_t column)
      : DataError(message + " at line " + std::to_string(line) + ", column " +
                  std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class InvalidSelector : public UsageError {
 public:
  using UsageError::UsageError;
};

class TaggerStreamMismatch : public DataError {
 public:
  using DataError::DataError;
};

class EmptyVocabulary : public DataError {
 public:
  using DataError::DataError;
};

class DegenerateInput : public DataError {
 public:
  using DataError::DataError;
};

class EmptyCluster : public DataError {
 public:
  EmptyCluster(const std::string& message, std::size_t cluster)
      : DataError(message), cluster_(cluster) {}
  std::size_t cluster() const { return cluster_; }

 private:
  std::size_t cluster_;
};

class InvalidK : public DataError {
 public:
  using DataError::DataError;
};

class NoOverlap : public DataError {
 public:
  using DataError::DataError;
};

// Wraps an error with the pipeline stage (and file, when known) it came from.
// Keeps the exit-code class of the wrapped error.
template <typename Base>
class StageError : public Base {
 public:
  StageError(const std::string& stage, const std::string& what)
      : Base(stage + ": " + what), stage_(stage) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace typoclust

#endif  // TYPOCLUST_ERROR_HPP_
