#pragma once

#include <stdexcept>
#include <string>

namespace wkam {

// Error classes map one-to-one onto the C API status codes.

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Solver left its stability/convergence envelope (CFL violation, non-finite
// state, iteration cap without reaching tolerance).
struct DivergedError : std::runtime_error {
  explicit DivergedError(const std::string& what) : std::runtime_error(what) {}
};

struct InfeasibleError : std::runtime_error {
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

// Declared resource limits (atom budget, slab memory) would be exceeded.
struct BudgetError : std::runtime_error {
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

struct InternalError : std::runtime_error {
  explicit InternalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wkam
