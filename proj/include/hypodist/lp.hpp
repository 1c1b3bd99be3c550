#pragma once

// Linear programs with bounded variables and ranged rows, solved by a
// revised primal simplex.
//
// Every row i gets a logical variable r_i with A x - r = 0 and r_i bounded by
// the row's range. A basis therefore mixes logical columns (-e_i) and
// structural columns; only the structural block on the rows whose logical is
// nonbasic (the kernel) needs a sparse LU. Basis changes between refactors
// are kept as a product of eta matrices.

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace hypodist {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Relation { le, ge, eq };
enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };
enum class BasisStatus : std::uint8_t { basic, at_lower, at_upper, at_zero };

inline const char* to_string(LpStatus s) {
  switch (s) {
  case LpStatus::optimal: return "optimal";
  case LpStatus::infeasible: return "infeasible";
  case LpStatus::unbounded: return "unbounded";
  case LpStatus::iteration_limit: return "iteration-limit";
  }
  return "unknown";
}

struct LpTerm {
  std::size_t var;
  double coef;
};

struct LpRow {
  std::vector<LpTerm> terms; // sorted by variable, no duplicates, no zeros
  double lower = -kInfinity;
  double upper = kInfinity;
};

class LpModel {
public:
  std::size_t add_variable(double lower, double upper, double cost = 0.0, std::string name = {}) {
    if (std::isnan(lower) || std::isnan(upper) || lower > upper || lower == kInfinity || upper == -kInfinity)
      throw InvalidArgument("add_variable: inverted or invalid bounds");
    if (!std::isfinite(cost)) throw InvalidArgument("add_variable: objective coefficient must be finite");
    lower_.push_back(lower);
    upper_.push_back(upper);
    cost_.push_back(cost);
    names_.push_back(std::move(name));
    return lower_.size() - 1;
  }

  std::size_t add_constraint(std::vector<LpTerm> terms, Relation rel, double rhs) {
    if (!std::isfinite(rhs)) throw InvalidArgument("add_constraint: right-hand side must be finite");
    switch (rel) {
    case Relation::le: return add_range(std::move(terms), -kInfinity, rhs);
    case Relation::ge: return add_range(std::move(terms), rhs, kInfinity);
    case Relation::eq: return add_range(std::move(terms), rhs, rhs);
    }
    return 0;
  }

  /// lower <= sum(terms) <= upper; either side may be infinite.
  std::size_t add_range(std::vector<LpTerm> terms, double lower, double upper) {
    if (std::isnan(lower) || std::isnan(upper) || lower > upper)
      throw InvalidArgument("add_range: invalid row bounds");
    for (const auto& t : terms) {
      if (t.var >= lower_.size()) throw InvalidArgument("add_constraint: invalid variable handle");
      if (!std::isfinite(t.coef)) throw InvalidArgument("add_constraint: coefficients must be finite");
    }
    std::sort(terms.begin(), terms.end(), [](const LpTerm& a, const LpTerm& b) { return a.var < b.var; });
    std::vector<LpTerm> merged;
    merged.reserve(terms.size());
    for (const auto& t : terms) {
      if (!merged.empty() && merged.back().var == t.var) merged.back().coef += t.coef;
      else merged.push_back(t);
    }
    std::erase_if(merged, [](const LpTerm& t) { return t.coef == 0.0; });
    rows_.push_back({std::move(merged), lower, upper});
    return rows_.size() - 1;
  }

  void set_objective(std::size_t var, double cost) {
    if (var >= cost_.size()) throw InvalidArgument("set_objective: invalid variable handle");
    cost_[var] = cost;
  }

  void set_bounds(std::size_t var, double lower, double upper) {
    if (var >= lower_.size()) throw InvalidArgument("set_bounds: invalid variable handle");
    if (lower > upper) throw InvalidArgument("set_bounds: inverted bounds");
    lower_[var] = lower;
    upper_[var] = upper;
  }

  [[nodiscard]] std::size_t variable_count() const { return lower_.size(); }
  [[nodiscard]] std::size_t row_count() const { return rows_.size(); }
  [[nodiscard]] const std::vector<double>& lower() const { return lower_; }
  [[nodiscard]] const std::vector<double>& upper() const { return upper_; }
  [[nodiscard]] const std::vector<double>& cost() const { return cost_; }
  [[nodiscard]] const std::vector<LpRow>& rows() const { return rows_; }
  [[nodiscard]] const std::string& name(std::size_t var) const { return names_[var]; }

  [[nodiscard]] double activity(std::size_t row, std::span<const double> x) const {
    double s = 0.0;
    for (const auto& t : rows_[row].terms) s += t.coef * x[t.var];
    return s;
  }

  [[nodiscard]] double objective_value(std::span<const double> x) const {
    double s = 0.0;
    for (std::size_t j = 0; j < cost_.size(); ++j) s += cost_[j] * x[j];
    return s;
  }

  /// Largest violation of any row range or variable bound.
  [[nodiscard]] double max_violation(std::span<const double> x) const {
    double v = 0.0;
    for (std::size_t j = 0; j < lower_.size(); ++j) v = std::max({v, lower_[j] - x[j], x[j] - upper_[j]});
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const double a = activity(i, x);
      v = std::max({v, rows_[i].lower - a, a - rows_[i].upper});
    }
    return v;
  }

  /// CPLEX LP text format, for cross-checking with external solvers.
  void write_lp(std::ostream& os) const {
    os.precision(17);
    auto var_name = [&](std::size_t j) { return names_[j].empty() ? "x" + std::to_string(j) : names_[j]; };
    auto write_terms = [&](const std::vector<LpTerm>& terms) {
      if (terms.empty()) {
        os << " 0 " << var_name(0);
        return;
      }
      for (const auto& t : terms) os << (t.coef < 0 ? " - " : " + ") << std::abs(t.coef) << ' ' << var_name(t.var);
    };
    os << "Minimize\n obj:";
    std::vector<LpTerm> obj;
    for (std::size_t j = 0; j < cost_.size(); ++j)
      if (cost_[j] != 0.0) obj.push_back({j, cost_[j]});
    write_terms(obj);
    os << "\nSubject To\n";
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const auto& r = rows_[i];
      if (r.lower == r.upper) {
        os << " c" << i << ':';
        write_terms(r.terms);
        os << " = " << r.lower << '\n';
        continue;
      }
      if (r.lower > -kInfinity) {
        os << " c" << i << "_lo:";
        write_terms(r.terms);
        os << " >= " << r.lower << '\n';
      }
      if (r.upper < kInfinity) {
        os << " c" << i << "_hi:";
        write_terms(r.terms);
        os << " <= " << r.upper << '\n';
      }
    }
    os << "Bounds\n";
    for (std::size_t j = 0; j < lower_.size(); ++j) {
      const std::string n = var_name(j);
      if (lower_[j] == -kInfinity && upper_[j] == kInfinity) os << ' ' << n << " free\n";
      else if (lower_[j] == upper_[j]) os << ' ' << n << " = " << lower_[j] << '\n';
      else {
        os << ' ' << (lower_[j] == -kInfinity ? std::string("-inf") : std::to_string(lower_[j])) << " <= " << n;
        if (upper_[j] < kInfinity) os << " <= " << upper_[j];
        os << '\n';
      }
    }
    os << "End\n";
  }

private:
  std::vector<double> lower_, upper_, cost_;
  std::vector<std::string> names_;
  std::vector<LpRow> rows_;
};

struct LpSolution {
  LpStatus status = LpStatus::iteration_limit;
  std::vector<double> x;
  double objective = 0.0;
  std::size_t iterations = 0;
  /// Statuses of the structural variables followed by the row logicals;
  /// can seed a later solve of a model with the same shape.
  std::vector<BasisStatus> basis;
};

struct LpOptions {
  std::size_t max_iterations = 2'000'000;
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  std::size_t refactor_interval = 100;
  const std::vector<BasisStatus>* warm_start = nullptr;
};

/// Solver seam; the estimator only depends on this interface.
class LpSolver {
public:
  virtual ~LpSolver() = default;
  virtual LpSolution solve(const LpModel& model, const LpOptions& options) = 0;
};

namespace detail {

class SimplexEngine {
public:
  SimplexEngine(const LpModel& model, const LpOptions& opt)
      : model_(model), opt_(opt), n_(model.variable_count()), m_(model.row_count()), total_(n_ + m_) {
    ptol_ = 0.1 * opt.feasibility_tol;
    dtol_ = opt.optimality_tol;
    lo_.resize(total_);
    up_.resize(total_);
    cost_.assign(total_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
      lo_[j] = model.lower()[j];
      up_[j] = model.upper()[j];
      cost_[j] = model.cost()[j];
    }
    for (std::size_t i = 0; i < m_; ++i) {
      lo_[n_ + i] = model.rows()[i].lower;
      up_[n_ + i] = model.rows()[i].upper;
    }
    // column-compressed copy of A
    std::vector<std::size_t> count(n_ + 1, 0);
    for (const auto& r : model.rows())
      for (const auto& t : r.terms) ++count[t.var + 1];
    col_start_.assign(n_ + 1, 0);
    for (std::size_t j = 0; j < n_; ++j) col_start_[j + 1] = col_start_[j] + count[j + 1];
    row_idx_.resize(col_start_[n_]);
    val_.resize(col_start_[n_]);
    std::vector<std::size_t> fill(col_start_.begin(), col_start_.end() - 1);
    for (std::size_t i = 0; i < m_; ++i)
      for (const auto& t : model.rows()[i].terms) {
        row_idx_[fill[t.var]] = i;
        val_[fill[t.var]++] = t.coef;
      }
    x_.assign(total_, 0.0);
    st_.assign(total_, BasisStatus::at_lower);
    head_.assign(m_, 0);
    pos_.assign(total_, -1);
    logical_basic_.assign(m_, 1);
    kernel_of_row_.assign(m_, -1);
    work_.assign(m_, 0.0);
  }

  LpSolution run() {
    LpSolution sol;
    bool warm = opt_.warm_start != nullptr && opt_.warm_start->size() == total_ &&
                static_cast<std::size_t>(std::count(opt_.warm_start->begin(), opt_.warm_start->end(),
                                                    BasisStatus::basic)) == m_;
    if (warm) {
      st_ = *opt_.warm_start;
      for (std::size_t j = 0; j < total_; ++j)
        if (st_[j] != BasisStatus::basic) place_at_status(j);
      if (!refactor() || !recompute_basics()) warm = false;
    }
    if (!warm) slack_basis();

    std::size_t degenerate_run = 0;
    bool bland = false;
    int verify_rounds = 0;
    std::vector<double> cb(m_), y(m_), alpha(m_);
    while (true) {
      if (iterations_ >= opt_.max_iterations) {
        sol.status = LpStatus::iteration_limit;
        break;
      }
      if (etas_.size() >= opt_.refactor_interval) {
        if (!refactor() || !recompute_basics()) slack_basis();
      }
      // phase-dependent basic costs
      bool phase1 = false;
      for (std::size_t p = 0; p < m_; ++p) {
        const std::size_t v = head_[p];
        if (x_[v] < lo_[v] - ptol_) {
          cb[p] = -1.0;
          phase1 = true;
        } else if (x_[v] > up_[v] + ptol_) {
          cb[p] = 1.0;
          phase1 = true;
        } else {
          cb[p] = 0.0;
        }
      }
      if (!phase1)
        for (std::size_t p = 0; p < m_; ++p) cb[p] = cost_[head_[p]];
      y = cb;
      btran(y);

      // pricing
      std::size_t q = total_;
      double best = 0.0;
      int dir = 0;
      for (std::size_t j = 0; j < total_; ++j) {
        if (st_[j] == BasisStatus::basic || lo_[j] == up_[j]) continue;
        double d;
        if (j < n_) {
          d = phase1 ? 0.0 : cost_[j];
          for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k) d -= val_[k] * y[row_idx_[k]];
        } else {
          d = y[j - n_];
        }
        int want = 0;
        if (d < -dtol_ && (st_[j] == BasisStatus::at_lower || st_[j] == BasisStatus::at_zero)) want = 1;
        else if (d > dtol_ && (st_[j] == BasisStatus::at_upper || st_[j] == BasisStatus::at_zero)) want = -1;
        if (want == 0) continue;
        if (bland) {
          q = j;
          dir = want;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          q = j;
          dir = want;
        }
      }

      if (q == total_) {
        // no improving column: confirm on a fresh factorization
        if (!etas_.empty() && verify_rounds < 8) {
          ++verify_rounds;
          if (!refactor() || !recompute_basics()) slack_basis();
          continue;
        }
        sol.status = phase1 ? LpStatus::infeasible : LpStatus::optimal;
        break;
      }

      // entering column in row space, then through the basis inverse
      std::fill(alpha.begin(), alpha.end(), 0.0);
      if (q < n_) {
        for (std::size_t k = col_start_[q]; k < col_start_[q + 1]; ++k) alpha[row_idx_[k]] = val_[k];
      } else {
        alpha[q - n_] = -1.0;
      }
      ftran(alpha);

      // Harris two-pass ratio test
      const double dirf = static_cast<double>(dir);
      double tmax = kInfinity;
      for (std::size_t p = 0; p < m_; ++p) {
        const double a = alpha[p];
        if (std::abs(a) < kPivotTol) continue;
        const double rate = -dirf * a;
        double bound;
        if (!blocking_bound(head_[p], rate, bound)) continue;
        const double relaxed = rate > 0 ? bound + ptol_ : bound - ptol_;
        tmax = std::min(tmax, (relaxed - x_[head_[p]]) / rate);
      }
      std::size_t leave = m_;
      double t = kInfinity, best_pivot = 0.0, leave_bound = 0.0;
      if (tmax < kInfinity) {
        for (std::size_t p = 0; p < m_; ++p) {
          const double a = alpha[p];
          if (std::abs(a) < kPivotTol) continue;
          const double rate = -dirf * a;
          double bound;
          if (!blocking_bound(head_[p], rate, bound)) continue;
          const double ratio = (bound - x_[head_[p]]) / rate;
          if (ratio <= tmax && std::abs(a) > best_pivot) {
            best_pivot = std::abs(a);
            leave = p;
            leave_bound = bound;
            t = std::max(ratio, 0.0);
          }
        }
      }
      const double flip = (lo_[q] > -kInfinity && up_[q] < kInfinity) ? up_[q] - lo_[q] : kInfinity;
      if (flip <= t) {
        t = flip;
        leave = m_;
      }
      if (t == kInfinity) {
        sol.status = phase1 ? LpStatus::infeasible : LpStatus::unbounded;
        break;
      }

      ++iterations_;
      for (std::size_t p = 0; p < m_; ++p)
        if (alpha[p] != 0.0) x_[head_[p]] -= dirf * alpha[p] * t;
      x_[q] += dirf * t;
      if (t <= 1e-12) {
        if (++degenerate_run > 5 * std::max<std::size_t>(n_, 1)) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
      if (leave == m_) {
        st_[q] = dir > 0 ? BasisStatus::at_upper : BasisStatus::at_lower;
        x_[q] = dir > 0 ? up_[q] : lo_[q];
        continue;
      }
      const std::size_t out = head_[leave];
      x_[out] = leave_bound;
      st_[out] = (leave_bound == lo_[out]) ? BasisStatus::at_lower : BasisStatus::at_upper;
      pos_[out] = -1;
      head_[leave] = q;
      pos_[q] = static_cast<std::ptrdiff_t>(leave);
      st_[q] = BasisStatus::basic;
      Eta e;
      e.pos = leave;
      e.pivot = alpha[leave];
      for (std::size_t p = 0; p < m_; ++p)
        if (p != leave && std::abs(alpha[p]) > 1e-14) e.entries.emplace_back(p, alpha[p]);
      etas_.push_back(std::move(e));
    }

    sol.iterations = iterations_;
    sol.x.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_));
    for (std::size_t j = 0; j < n_; ++j) sol.x[j] = std::clamp(sol.x[j], lo_[j], up_[j]);
    sol.objective = model_.objective_value(sol.x);
    sol.basis = st_;
    return sol;
  }

private:
  static constexpr double kPivotTol = 1e-9;

  struct Eta {
    std::size_t pos = 0;
    double pivot = 1.0;
    std::vector<std::pair<std::size_t, double>> entries;
  };

  /// Bound a basic variable runs into when moving at `rate`; false if none.
  bool blocking_bound(std::size_t v, double rate, double& bound) const {
    const double xv = x_[v];
    if (rate > 0) {
      if (xv < lo_[v] - ptol_) bound = lo_[v];
      else if (xv > up_[v] + ptol_) return false;
      else bound = up_[v];
    } else {
      if (xv > up_[v] + ptol_) bound = up_[v];
      else if (xv < lo_[v] - ptol_) return false;
      else bound = lo_[v];
    }
    return std::isfinite(bound);
  }

  void place_at_status(std::size_t j) {
    switch (st_[j]) {
    case BasisStatus::at_lower:
      if (lo_[j] > -kInfinity) {
        x_[j] = lo_[j];
        return;
      }
      break;
    case BasisStatus::at_upper:
      if (up_[j] < kInfinity) {
        x_[j] = up_[j];
        return;
      }
      break;
    default: break;
    }
    nonbasic_default(j);
  }

  void nonbasic_default(std::size_t j) {
    if (lo_[j] > -kInfinity) {
      st_[j] = BasisStatus::at_lower;
      x_[j] = lo_[j];
    } else if (up_[j] < kInfinity) {
      st_[j] = BasisStatus::at_upper;
      x_[j] = up_[j];
    } else {
      st_[j] = BasisStatus::at_zero;
      x_[j] = 0.0;
    }
  }

  /// All logicals basic; structurals at the bound nearest their value.
  void slack_basis() {
    for (std::size_t j = 0; j < n_; ++j) {
      const double v = x_[j];
      if (lo_[j] > -kInfinity && (up_[j] == kInfinity || std::abs(v - lo_[j]) <= std::abs(v - up_[j]))) {
        st_[j] = BasisStatus::at_lower;
        x_[j] = lo_[j];
      } else if (up_[j] < kInfinity) {
        st_[j] = BasisStatus::at_upper;
        x_[j] = up_[j];
      } else {
        st_[j] = BasisStatus::at_zero;
        x_[j] = 0.0;
      }
    }
    for (std::size_t i = 0; i < m_; ++i) st_[n_ + i] = BasisStatus::basic;
    refactor();
    recompute_basics();
  }

  bool refactor() {
    etas_.clear();
    std::fill(pos_.begin(), pos_.end(), -1);
    kernel_rows_.clear();
    kernel_cols_.clear();
    for (std::size_t i = 0; i < m_; ++i) {
      logical_basic_[i] = st_[n_ + i] == BasisStatus::basic ? 1 : 0;
      kernel_of_row_[i] = -1;
      if (logical_basic_[i]) {
        head_[i] = n_ + i;
        pos_[n_ + i] = static_cast<std::ptrdiff_t>(i);
      } else {
        kernel_of_row_[i] = static_cast<std::ptrdiff_t>(kernel_rows_.size());
        kernel_rows_.push_back(i);
      }
    }
    for (std::size_t j = 0; j < n_; ++j)
      if (st_[j] == BasisStatus::basic) kernel_cols_.push_back(j);
    if (kernel_cols_.size() != kernel_rows_.size()) return false;
    for (std::size_t k = 0; k < kernel_rows_.size(); ++k) {
      head_[kernel_rows_[k]] = kernel_cols_[k];
      pos_[kernel_cols_[k]] = static_cast<std::ptrdiff_t>(kernel_rows_[k]);
    }
    const auto t = static_cast<Eigen::Index>(kernel_rows_.size());
    if (t == 0) return true;
    std::vector<Eigen::Triplet<double>> trip;
    for (std::size_t k = 0; k < kernel_cols_.size(); ++k) {
      const std::size_t j = kernel_cols_[k];
      for (std::size_t e = col_start_[j]; e < col_start_[j + 1]; ++e) {
        const auto r = kernel_of_row_[row_idx_[e]];
        if (r >= 0) trip.emplace_back(static_cast<int>(r), static_cast<int>(k), val_[e]);
      }
    }
    kernel_.resize(t, t);
    kernel_.setFromTriplets(trip.begin(), trip.end());
    kernel_.makeCompressed();
    lu_.analyzePattern(kernel_);
    lu_.factorize(kernel_);
    return lu_.info() == Eigen::Success;
  }

  /// Basic values from the nonbasic ones: B x_B = -N x_N.
  bool recompute_basics() {
    std::vector<double> b(m_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
      if (st_[j] == BasisStatus::basic || x_[j] == 0.0) continue;
      for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k) b[row_idx_[k]] -= val_[k] * x_[j];
    }
    for (std::size_t i = 0; i < m_; ++i)
      if (st_[n_ + i] != BasisStatus::basic) b[i] += x_[n_ + i];
    ftran(b);
    for (std::size_t p = 0; p < m_; ++p) x_[head_[p]] = b[p];
    // residual check guards against a numerically singular kernel
    double worst = 0.0;
    std::vector<double> r(m_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
      if (x_[j] == 0.0) continue;
      for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k) r[row_idx_[k]] += val_[k] * x_[j];
    }
    for (std::size_t i = 0; i < m_; ++i) worst = std::max(worst, std::abs(r[i] - x_[n_ + i]));
    if (!std::isfinite(worst) || worst > 1e-7) return false;
    return true;
  }

  /// Row-space vector in, basis-position vector out.
  void ftran(std::vector<double>& v) {
    const std::size_t t = kernel_rows_.size();
    if (t > 0) {
      Eigen::VectorXd rhs(static_cast<Eigen::Index>(t));
      for (std::size_t k = 0; k < t; ++k) rhs[static_cast<Eigen::Index>(k)] = v[kernel_rows_[k]];
      const Eigen::VectorXd z = lu_.solve(rhs);
      for (std::size_t k = 0; k < t; ++k) {
        const double zk = z[static_cast<Eigen::Index>(k)];
        if (zk == 0.0) continue;
        const std::size_t j = kernel_cols_[k];
        for (std::size_t e = col_start_[j]; e < col_start_[j + 1]; ++e)
          if (logical_basic_[row_idx_[e]]) work_[row_idx_[e]] += val_[e] * zk;
      }
      for (std::size_t i = 0; i < m_; ++i) {
        if (logical_basic_[i]) {
          v[i] = work_[i] - v[i];
          work_[i] = 0.0;
        } else {
          v[i] = z[kernel_of_row_[i]];
        }
      }
    } else {
      for (std::size_t i = 0; i < m_; ++i) v[i] = -v[i];
    }
    for (const auto& e : etas_) {
      double zr = v[e.pos];
      if (zr == 0.0) continue;
      zr /= e.pivot;
      v[e.pos] = zr;
      for (const auto& [p, a] : e.entries) v[p] -= a * zr;
    }
  }

  /// Basis-position vector in, row-space vector out: solves B^T y = c.
  void btran(std::vector<double>& c) {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double s = c[it->pos];
      for (const auto& [p, a] : it->entries) s -= a * c[p];
      c[it->pos] = s / it->pivot;
    }
    const std::size_t t = kernel_rows_.size();
    for (std::size_t i = 0; i < m_; ++i)
      if (logical_basic_[i]) c[i] = -c[i];
    if (t == 0) return;
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(t));
    for (std::size_t k = 0; k < t; ++k) {
      double s = c[kernel_rows_[k]];
      const std::size_t j = kernel_cols_[k];
      for (std::size_t e = col_start_[j]; e < col_start_[j + 1]; ++e)
        if (logical_basic_[row_idx_[e]]) s -= val_[e] * c[row_idx_[e]];
      rhs[static_cast<Eigen::Index>(k)] = s;
    }
    const Eigen::VectorXd yk = lu_.transpose().solve(rhs);
    for (std::size_t k = 0; k < t; ++k) c[kernel_rows_[k]] = yk[static_cast<Eigen::Index>(k)];
  }

  const LpModel& model_;
  LpOptions opt_;
  std::size_t n_, m_, total_;
  double ptol_ = 1e-10, dtol_ = 1e-9;
  std::vector<double> lo_, up_, cost_;
  std::vector<std::size_t> col_start_, row_idx_;
  std::vector<double> val_;
  std::vector<double> x_;
  std::vector<BasisStatus> st_;
  std::vector<std::size_t> head_;
  std::vector<std::ptrdiff_t> pos_;
  std::vector<char> logical_basic_;
  std::vector<std::ptrdiff_t> kernel_of_row_;
  std::vector<std::size_t> kernel_rows_, kernel_cols_;
  std::vector<double> work_;
  Eigen::SparseMatrix<double> kernel_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;
  std::size_t iterations_ = 0;
};

} // namespace detail

/// Bounded-variable revised primal simplex: composite phase 1 on the sum of
/// infeasibilities, Dantzig pricing, Bland's rule after a run of degenerate
/// pivots, Harris ratio test.
class SimplexSolver final : public LpSolver {
public:
  LpSolution solve(const LpModel& model, const LpOptions& options) override {
    if (model.variable_count() == 0) throw InvalidArgument("solve: empty model");
    detail::SimplexEngine engine(model, options);
    return engine.run();
  }
};

inline LpSolution solve(const LpModel& model, const LpOptions& options = {}) {
  SimplexSolver s;
  return s.solve(model, options);
}

} // namespace hypodist
