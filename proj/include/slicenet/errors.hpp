#ifndef SLICENET_ERRORS_HPP_
#define SLICENET_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace slicenet {

// Base for all domain errors so callers can catch the family at once.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input (schema or semantic). `path` points at the offending
// field: JSON-pointer style ("/vfs/0/demand/cpu_millicores") for schema
// violations, bracket style ("vlinks[0].endpoint_b") for semantic ones.
class ValidationError : public Error {
 public:
  ValidationError(std::string path, const std::string& reason)
      : Error(path + ": " + reason), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// rv_sub would produce a negative component. Signals an accounting bug,
// never a user-input problem.
class UnderflowError : public Error {
 public:
  explicit UnderflowError(const std::string& what) : Error(what) {}
};

class NotFoundError : public Error {
 public:
  explicit NotFoundError(const std::string& what) : Error(what) {}
};

// delegate() with a scope the grantor does not own.
class OwnershipError : public Error {
 public:
  explicit OwnershipError(const std::string& what) : Error(what) {}
};

class UnauthorizedError : public Error {
 public:
  explicit UnauthorizedError(const std::string& what) : Error(what) {}
};

// Node agent refused a spawn: instance cap or capacity would be exceeded.
class CapacityError : public Error {
 public:
  explicit CapacityError(const std::string& what) : Error(what) {}
};

class EquipmentExhaustedError : public Error {
 public:
  explicit EquipmentExhaustedError(const std::string& what) : Error(what) {}
};

class SelfFederationError : public Error {
 public:
  explicit SelfFederationError(const std::string& what) : Error(what) {}
};

// Operation called in a lifecycle state its precondition forbids.
class LifecycleError : public Error {
 public:
  explicit LifecycleError(const std::string& what) : Error(what) {}
};

}  // namespace slicenet

#endif  // SLICENET_ERRORS_HPP_
