// Copyright 2026 The dqlm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace dqlm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A lattice or system size below the minimum supported by a layout kind.
class SizeError : public Error {
public:
    using Error::Error;
};

/// Operands live on different spaces (dimension or basis tag mismatch).
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// Slot, site or bit-string index outside its valid range.
class IndexError : public Error {
public:
    using Error::Error;
};

/// An operator or superoperator couples a sector to its complement.
class LeakageError : public Error {
public:
    LeakageError(const std::string& what, double leak) : Error(what), leak_(leak) {}
    double leak() const noexcept { return leak_; }

private:
    double leak_;
};

/// A charge sector that contains no basis state.
class EmptySectorError : public Error {
public:
    using Error::Error;
};

/// Model parameters that are not admissible (negative rate, wrong layout).
class ModelError : public Error {
public:
    using Error::Error;
};

/// Numerical solver failure: size cap exceeded, no convergence, step underflow.
class SolverError : public Error {
public:
    using Error::Error;
};

/// Malformed experiment configuration.
class SchemaError : public Error {
public:
    using Error::Error;
};

}  // namespace dqlm
