#pragma once

#include <stdexcept>

namespace wss {

// Common base so callers can catch everything the library throws.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed textual input (rationals, JSON documents, command lines).
struct ParseError : Error {
  using Error::Error;
};

// Shape mismatch between matrices, vectors or graded pieces.
struct DimensionError : Error {
  using Error::Error;
};

// The requested sign profile does not square to zero on the assembled page.
struct SignInconsistency : Error {
  using Error::Error;
};

// A product was requested between chains supported on incompatible strata.
struct StratumMismatch : Error {
  using Error::Error;
};

// An operation requiring a lowest-weight (left column) class was handed
// something supported elsewhere on the page.
struct NotLeftColumn : Error {
  using Error::Error;
};

// A projection step was handed an element that is not closed on the page.
struct NotCocycle : Error {
  using Error::Error;
};

// The input complex is missing strata that the requested construction needs.
struct MissingStrata : Error {
  using Error::Error;
};

// A linear constraint system admits no solution.
struct Infeasible : Error {
  using Error::Error;
};

}  // namespace wss
