#pragma once

#include <stdexcept>
#include <string>

namespace sd {

// Error taxonomy shared by all modules. The CLI maps these onto its
// exit-code table: input degeneracy -> 2, budget -> 3, numeric -> 4.

struct DegenerateMap : std::runtime_error {
    explicit DegenerateMap(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateFiber : std::runtime_error {
    explicit DegenerateFiber(const std::string& what) : std::runtime_error(what) {}
};

struct SpecialCurve : std::runtime_error {
    explicit SpecialCurve(const std::string& what) : std::runtime_error(what) {}
};

struct NonDominant : std::runtime_error {
    explicit NonDominant(const std::string& what) : std::runtime_error(what) {}
};

struct DegreeNonZero : std::runtime_error {
    explicit DegreeNonZero(const std::string& what) : std::runtime_error(what) {}
};

struct ExceptionalStart : std::runtime_error {
    explicit ExceptionalStart(const std::string& what) : std::runtime_error(what) {}
};

struct InsufficientSamples : std::runtime_error {
    explicit InsufficientSamples(const std::string& what) : std::runtime_error(what) {}
};

struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct NoConvergence : std::runtime_error {
    explicit NoConvergence(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace sd
