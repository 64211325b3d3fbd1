#pragma once

/* errors.hpp -- exception taxonomy shared by all modules.
 *
 * Everything derives from gotcha::Error so callers can catch one base.
 * ConfigError groups problems with inputs the operator controls (documents,
 * parameters); RuntimeError groups failures arising mid-computation.
 */

#include <stdexcept>
#include <string>

namespace gotcha {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class RuntimeError : public Error {
 public:
  using Error::Error;
};

// Document structure violations: unknown keys, bad types, missing fields.
class SchemaError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class DuplicateIdError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class InvalidSubcategoryError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class PassiveWithoutTrustedDeviceError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class UnknownBenefitKeyError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class UnknownChallengeError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class MissingHardnessError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class MissingGapDataError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Parameter or value outside its documented domain.
class DomainError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class EmptySequenceError : public RuntimeError {
 public:
  using RuntimeError::RuntimeError;
};

class EmptyTraceError : public RuntimeError {
 public:
  using RuntimeError::RuntimeError;
};

class EmptyEligibleSetError : public RuntimeError {
 public:
  using RuntimeError::RuntimeError;
};

class EmptySuiteError : public RuntimeError {
 public:
  using RuntimeError::RuntimeError;
};

class InsufficientDataError : public RuntimeError {
 public:
  using RuntimeError::RuntimeError;
};

}  // namespace gotcha
