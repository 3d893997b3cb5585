#pragma once

#include <stdexcept>
#include <string>

namespace spl {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed network, blueprint or reaction-network description.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A caller broke an operation's precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Meta fixed-set promotion failed because a run never reached a parent loop.
class PromotionError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace spl
