#pragma once

#include <stdexcept>
#include <string>

namespace fwr {

// Bad arguments are reported with std::invalid_argument; the two types below
// cover the remaining failure classes.

/// A valid request outside what the implementation supports.
class UnsupportedError : public std::logic_error {
 public:
  explicit UnsupportedError(const std::string& what) : std::logic_error(what) {}
};

/// A solve or quadrature that failed to produce a trustworthy value.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fwr
