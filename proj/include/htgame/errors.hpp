#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace htgame {

/// Raised when an input (game instance, strategy, scenario field) breaks an invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class SolveErrc {
  rank_deficient,     // indifference system is underdetermined
  reduced_support,    // full-support solution has negative entries
  infeasible_family,  // no non-negative point in the defender family
  no_root_in_bracket,
  inconsistent_system,
};

std::string_view to_string(SolveErrc code);

/// A solver could not produce an answer under its assumptions. These are
/// reportable outcomes (sweeps record them in a status column).
class SolveError : public std::runtime_error {
 public:
  SolveError(SolveErrc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  SolveErrc code() const noexcept { return code_; }

 private:
  SolveErrc code_;
};

}  // namespace htgame
