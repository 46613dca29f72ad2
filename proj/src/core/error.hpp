// Copyright 2026 The touchbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef TOUCHBENCH_CORE_ERROR_HPP_
#define TOUCHBENCH_CORE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace touchbench {

// Error categories map 1:1 onto CLI exit codes and C API status codes.
class Error : public std::runtime_error {
 public:
  Error(int code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

// Bad flags / bad config keys. Exit code 1.
class UsageError : public Error {
 public:
  explicit UsageError(const std::string& msg) : Error(1, msg) {}
};

// Malformed or inconsistent input data. Exit code 2.
class DataError : public Error {
 public:
  explicit DataError(const std::string& msg) : Error(2, msg) {}
};

// Structurally valid data that cannot support the requested operation
// (too few users, sessions, strokes...). Exit code 3.
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& msg) : Error(3, msg) {}
};

}  // namespace touchbench

#endif  // TOUCHBENCH_CORE_ERROR_HPP_
