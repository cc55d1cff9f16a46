#pragma once

#include <stdexcept>
#include <string>

namespace uoan {

/// Invalid or inconsistent configuration. `what()` names the offending key path when one exists.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Violated operation precondition (coincident endpoints, unknown node id, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// References are too close to coplanar/collinear to fix a 3D position.
class DegenerateGeometry : public DomainError {
public:
    using DomainError::DomainError;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace uoan
