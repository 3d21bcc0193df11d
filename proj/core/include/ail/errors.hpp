#pragma once

#include <stdexcept>
#include <string>

namespace ail {

// Base for all library errors. Subclasses distinguish bad inputs from
// blown resource caps so callers can map them to exit codes.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid argument: non-finite scores, out-of-range action, unknown context.
class InvalidInput : public Error {
public:
    explicit InvalidInput(const std::string& what) : Error(what) {}
};

// Exhaustive search refused: instance exceeds the configured cap.
class ResourceLimit : public Error {
public:
    explicit ResourceLimit(const std::string& what) : Error(what) {}
};

}  // namespace ail
