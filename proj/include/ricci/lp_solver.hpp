#pragma once

#include <optional>
#include <vector>

// Dense two-phase simplex for the small programs that show up in curvature
// computations (a few dozen variables and rows).
namespace ricci::lp {

enum class Relation { less_equal, equal, greater_equal };

struct Constraint {
  std::vector<double> coefficients;
  Relation relation = Relation::less_equal;
  double bound = 0.0;
};

// Default is x >= 0. Leave both sides empty for a free variable.
struct VariableBounds {
  std::optional<double> lower = 0.0;
  std::optional<double> upper;

  static VariableBounds free() { return {std::nullopt, std::nullopt}; }
};

// minimize objective . x  subject to constraints and per-variable bounds.
// An empty bounds vector means every variable is non-negative.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<Constraint> constraints;
  std::vector<VariableBounds> bounds;

  std::size_t variable_count() const { return objective.size(); }
  // Throws std::invalid_argument on width mismatches or inverted bounds.
  void validate() const;
};

enum class Status { optimal, infeasible, unbounded };

struct Solution {
  Status status = Status::infeasible;
  double value = 0.0;
  std::vector<double> point;
};

inline constexpr double kTolerance = 1e-9;

// Bland's rule throughout, so the method cannot cycle. Throws
// NumericalFailure when the iteration cap is hit or the returned point
// violates a constraint by more than kTolerance (relative to row scale).
Solution solve(const LinearProgram& lp);

}  // namespace ricci::lp
