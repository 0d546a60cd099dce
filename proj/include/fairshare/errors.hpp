#pragma once

#include <stdexcept>
#include <string>

namespace fairshare {

/// Malformed instance, allocation or witness input. The message names the
/// offending agent/item where there is one.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exact search was asked to run beyond its configured size limit.
class ScaleExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A share without an allocator, or a parameter combination that has no
/// proven allocation procedure (e.g. nested shares with q > 3).
class UnsupportedShare : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A run-time self check failed. Always a bug.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace fairshare
