#pragma once

#include <stdexcept>
#include <string>

namespace dtm {

/// Bad run configuration (flags, grids, orders). CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed problem description (JSON shape, expression syntax,
/// unknown identifiers, non-square systems). CLI exit code 3.
class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

/// The recurrence cannot be scheduled (no finite constraint shift,
/// acausal coefficient dependency). CLI exit code 4.
class PlanningError : public std::runtime_error {
public:
    explicit PlanningError(const std::string& what) : std::runtime_error(what) {}
};

/// Runtime numerical failure (singular division, domain violations,
/// Newton non-convergence, non-finite coefficients). CLI exit code 5.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Expression syntax error carrying the byte offset of the offending token.
class ParseError : public SchemaError {
public:
    ParseError(const std::string& what, std::size_t offset)
        : SchemaError(what + " (at byte " + std::to_string(offset) + ")"),
          offset_(offset) {}

    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

} // namespace dtm
