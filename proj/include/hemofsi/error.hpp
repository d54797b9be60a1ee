//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#pragma once

#include <stdexcept>
#include <string>

namespace hemofsi {

/// Base of every exception thrown by the library. The C API maps the
/// subclasses onto its status codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MeshError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hemofsi
