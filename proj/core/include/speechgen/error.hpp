#pragma once

#include <stdexcept>
#include <string>

namespace speechgen {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised while reading speech files or manifests.
class IngestError : public Error {
 public:
  using Error::Error;
};

// Raised for malformed or incompatible serialized artifacts.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Raised when a value violates a documented range or precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace speechgen
