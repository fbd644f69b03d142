#include "ricci/lp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "ricci/errors.hpp"

namespace ricci::lp {

namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kCleanEps = 1e-14;

// x_j = offset + sum over terms of sign * y_k, with y >= 0.
struct VariableMap {
  double offset = 0.0;
  std::size_t first = 0;  // index of the first y column
  double sign = 1.0;
  bool split = false;  // free variable: x = y_first - y_{first+1}
};

struct Row {
  std::vector<double> coefficients;  // over y columns
  Relation relation;
  double bound;
};

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : cols_(cols), data_(rows * cols, 0.0), rhs_(rows, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& rhs(std::size_t r) { return rhs_[r]; }
  double rhs(std::size_t r) const { return rhs_[r]; }
  std::size_t rows() const { return rhs_.size(); }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double p = at(pr, pc);
    for (std::size_t c = 0; c < cols_; ++c) at(pr, c) /= p;
    rhs(pr) /= p;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r < rows(); ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < cols_; ++c) {
        double& v = at(r, c);
        v -= f * at(pr, c);
        if (std::abs(v) < kCleanEps) v = 0.0;
      }
      at(r, pc) = 0.0;
      rhs(r) -= f * rhs(pr);
      if (std::abs(rhs(r)) < kCleanEps) rhs(r) = 0.0;
    }
  }

  void drop_row(std::size_t r) {
    data_.erase(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
    rhs_.erase(rhs_.begin() + static_cast<std::ptrdiff_t>(r));
  }

 private:
  std::size_t cols_;
  std::vector<double> data_;
  std::vector<double> rhs_;
};

enum class PhaseResult { optimal, unbounded };

class Simplex {
 public:
  Simplex(Tableau tableau, std::vector<std::size_t> basis, std::size_t iteration_cap)
      : t_(std::move(tableau)), basis_(std::move(basis)), cap_(iteration_cap) {}

  // Minimizes cost . z over columns with allowed[c] == true.
  PhaseResult run(const std::vector<double>& cost, const std::vector<bool>& allowed) {
    std::vector<double> reduced(t_.cols());
    while (true) {
      if (++iterations_ > cap_)
        throw NumericalFailure("simplex exceeded " + std::to_string(cap_) + " iterations");
      for (std::size_t c = 0; c < t_.cols(); ++c) {
        double d = cost[c];
        for (std::size_t r = 0; r < t_.rows(); ++r) d -= cost[basis_[r]] * t_.at(r, c);
        reduced[c] = d;
      }
      std::size_t entering = t_.cols();
      for (std::size_t c = 0; c < t_.cols(); ++c) {
        if (allowed[c] && reduced[c] < -kTolerance) {
          entering = c;
          break;
        }
      }
      if (entering == t_.cols()) return PhaseResult::optimal;

      std::size_t leaving = t_.rows();
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < t_.rows(); ++r) {
        const double a = t_.at(r, entering);
        if (a <= kPivotEps) continue;
        const double ratio = std::max(t_.rhs(r), 0.0) / a;
        if (ratio < best - kTolerance ||
            (ratio <= best + kTolerance && leaving < t_.rows() && basis_[r] < basis_[leaving])) {
          best = std::min(best, ratio);
          leaving = r;
        }
      }
      if (leaving == t_.rows()) return PhaseResult::unbounded;
      t_.pivot(leaving, entering);
      basis_[leaving] = entering;
    }
  }

  Tableau& tableau() { return t_; }
  std::vector<std::size_t>& basis() { return basis_; }

 private:
  Tableau t_;
  std::vector<std::size_t> basis_;
  std::size_t cap_;
  std::size_t iterations_ = 0;
};

}  // namespace

void LinearProgram::validate() const {
  const std::size_t n = objective.size();
  if (!bounds.empty() && bounds.size() != n)
    throw std::invalid_argument("bounds size does not match objective width");
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    if (constraints[i].coefficients.size() != n)
      throw std::invalid_argument("constraint " + std::to_string(i) + " has the wrong width");
  }
  for (const auto& b : bounds) {
    if (b.lower && b.upper && *b.lower > *b.upper)
      throw std::invalid_argument("variable lower bound exceeds upper bound");
  }
}

Solution solve(const LinearProgram& lp) {
  lp.validate();
  const std::size_t n = lp.variable_count();
  const auto bound_of = [&](std::size_t j) {
    return lp.bounds.empty() ? VariableBounds{} : lp.bounds[j];
  };

  // Shift / reflect / split every variable onto y >= 0.
  std::vector<VariableMap> maps(n);
  std::size_t ny = 0;
  std::vector<Row> rows;
  std::vector<std::pair<std::size_t, double>> upper_rows;  // (y column, capacity)
  for (std::size_t j = 0; j < n; ++j) {
    const auto b = bound_of(j);
    auto& m = maps[j];
    m.first = ny;
    if (b.lower) {
      m.offset = *b.lower;
      ++ny;
      if (b.upper) upper_rows.emplace_back(m.first, *b.upper - *b.lower);
    } else if (b.upper) {
      m.offset = *b.upper;
      m.sign = -1.0;
      ++ny;
    } else {
      m.split = true;
      ny += 2;
    }
  }

  const auto transform = [&](const std::vector<double>& coeffs, double& constant) {
    std::vector<double> out(ny, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const auto& m = maps[j];
      constant += coeffs[j] * m.offset;
      if (m.split) {
        out[m.first] += coeffs[j];
        out[m.first + 1] -= coeffs[j];
      } else {
        out[m.first] += m.sign * coeffs[j];
      }
    }
    return out;
  };

  for (const auto& c : lp.constraints) {
    double constant = 0.0;
    auto coeffs = transform(c.coefficients, constant);
    rows.push_back({std::move(coeffs), c.relation, c.bound - constant});
  }
  for (const auto& [col, cap] : upper_rows) {
    std::vector<double> coeffs(ny, 0.0);
    coeffs[col] = 1.0;
    rows.push_back({std::move(coeffs), Relation::less_equal, cap});
  }
  for (auto& r : rows) {
    if (r.bound < 0.0) {
      for (auto& a : r.coefficients) a = -a;
      r.bound = -r.bound;
      if (r.relation == Relation::less_equal) r.relation = Relation::greater_equal;
      else if (r.relation == Relation::greater_equal) r.relation = Relation::less_equal;
    }
  }

  // Column layout: y | slack/surplus | artificial.
  const std::size_t m = rows.size();
  std::size_t n_slack = 0;
  std::size_t n_art = 0;
  for (const auto& r : rows) {
    if (r.relation != Relation::equal) ++n_slack;
    if (r.relation != Relation::less_equal) ++n_art;
  }
  const std::size_t n_cols = ny + n_slack + n_art;
  Tableau tab(m, n_cols);
  std::vector<std::size_t> basis(m);
  std::vector<bool> is_artificial(n_cols, false);
  double bound_scale = 1.0;
  {
    std::size_t slack = ny;
    std::size_t art = ny + n_slack;
    for (std::size_t i = 0; i < m; ++i) {
      const auto& r = rows[i];
      for (std::size_t c = 0; c < ny; ++c) tab.at(i, c) = r.coefficients[c];
      tab.rhs(i) = r.bound;
      bound_scale = std::max(bound_scale, std::abs(r.bound));
      switch (r.relation) {
        case Relation::less_equal:
          tab.at(i, slack) = 1.0;
          basis[i] = slack++;
          break;
        case Relation::greater_equal:
          tab.at(i, slack++) = -1.0;
          tab.at(i, art) = 1.0;
          is_artificial[art] = true;
          basis[i] = art++;
          break;
        case Relation::equal:
          tab.at(i, art) = 1.0;
          is_artificial[art] = true;
          basis[i] = art++;
          break;
      }
    }
  }

  Simplex simplex(std::move(tab), std::move(basis), 200 * (m + n_cols) + 1000);

  // Phase 1.
  if (n_art > 0) {
    std::vector<double> cost(n_cols, 0.0);
    for (std::size_t c = 0; c < n_cols; ++c)
      if (is_artificial[c]) cost[c] = 1.0;
    std::vector<bool> all(n_cols, true);
    simplex.run(cost, all);
    auto& t = simplex.tableau();
    auto& b = simplex.basis();
    double infeasibility = 0.0;
    for (std::size_t r = 0; r < t.rows(); ++r)
      if (is_artificial[b[r]]) infeasibility += t.rhs(r);
    if (infeasibility > kTolerance * bound_scale * static_cast<double>(m + 1))
      return Solution{Status::infeasible, 0.0, {}};
    // Drive remaining artificials (at level zero) out of the basis; a row
    // with no usable pivot is redundant and dropped.
    for (std::size_t r = 0; r < t.rows();) {
      if (!is_artificial[b[r]]) {
        ++r;
        continue;
      }
      std::size_t col = n_cols;
      for (std::size_t c = 0; c < n_cols; ++c) {
        if (!is_artificial[c] && std::abs(t.at(r, c)) > 1e-9) {
          col = c;
          break;
        }
      }
      if (col == n_cols) {
        t.drop_row(r);
        b.erase(b.begin() + static_cast<std::ptrdiff_t>(r));
      } else {
        t.pivot(r, col);
        b[r] = col;
        ++r;
      }
    }
  }

  // Phase 2.
  double objective_constant = 0.0;
  const auto y_cost = transform(lp.objective, objective_constant);
  std::vector<double> cost(n_cols, 0.0);
  std::copy(y_cost.begin(), y_cost.end(), cost.begin());
  std::vector<bool> allowed(n_cols);
  for (std::size_t c = 0; c < n_cols; ++c) allowed[c] = !is_artificial[c];
  if (simplex.run(cost, allowed) == PhaseResult::unbounded)
    return Solution{Status::unbounded, -std::numeric_limits<double>::infinity(), {}};

  std::vector<double> y(n_cols, 0.0);
  const auto& t = simplex.tableau();
  const auto& b = simplex.basis();
  for (std::size_t r = 0; r < t.rows(); ++r) y[b[r]] = std::max(t.rhs(r), 0.0);

  Solution sol;
  sol.status = Status::optimal;
  sol.point.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& mp = maps[j];
    sol.point[j] = mp.split ? y[mp.first] - y[mp.first + 1] : mp.offset + mp.sign * y[mp.first];
  }
  sol.value = 0.0;
  for (std::size_t j = 0; j < n; ++j) sol.value += lp.objective[j] * sol.point[j];

  // Feasibility audit on the original formulation.
  for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
    const auto& c = lp.constraints[i];
    double lhs = 0.0;
    double scale = 1.0 + std::abs(c.bound);
    for (std::size_t j = 0; j < n; ++j) {
      lhs += c.coefficients[j] * sol.point[j];
      scale += std::abs(c.coefficients[j] * sol.point[j]);
    }
    const double slack = lhs - c.bound;
    const double tol = kTolerance * scale;
    const bool ok = c.relation == Relation::equal          ? std::abs(slack) <= tol
                    : c.relation == Relation::less_equal ? slack <= tol
                                                         : slack >= -tol;
    if (!ok)
      throw NumericalFailure("simplex point violates constraint " + std::to_string(i) + " by " +
                             std::to_string(std::abs(slack)));
  }
  for (std::size_t j = 0; j < n; ++j) {
    const auto bj = bound_of(j);
    const double tol = kTolerance * (1.0 + std::abs(sol.point[j]));
    if ((bj.lower && sol.point[j] < *bj.lower - tol) || (bj.upper && sol.point[j] > *bj.upper + tol))
      throw NumericalFailure("simplex point violates bounds of variable " + std::to_string(j));
  }
  return sol;
}

}  // namespace ricci::lp
