#pragma once

#include <stdexcept>
#include <string>

namespace cliquefactor {

/// A configured size cap (cliques, edges, solutions) was exceeded.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A search ran out of its node budget before reaching a verdict.
class BudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A randomized stage failed on every allowed attempt.
class RetriesExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No unused absorbing member is available for some leftover t-set.
class AbsorptionFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cliquefactor
