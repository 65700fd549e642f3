#include "secbc/polytope.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <stdexcept>

namespace secbc {

InstantiatedSystem InstantiatedSystem::instantiate(const Region& region, const AtomTable& table) {
  InstantiatedSystem sys;
  sys.variables = region.variables;
  std::map<RateSymbol, size_t> index;
  for (size_t i = 0; i < sys.variables.size(); ++i) index[sys.variables[i]] = i;
  for (const auto& iq : region.inequalities) {
    std::vector<Rat> coeffs(sys.variables.size(), Rat(0));
    for (const auto& [s, c] : iq.lhs) {
      auto it = index.find(s);
      if (it == index.end()) throw std::logic_error("instantiate: symbol not in variable list");
      coeffs[it->second] = c;
    }
    sys.rows.push_back(std::move(coeffs));
    sys.bounds.push_back(iq.rhs.eval(table));
  }
  return sys;
}

void InstantiatedSystem::add_row(std::vector<Rat> coeffs, Rat bound) {
  if (coeffs.size() != variables.size()) throw std::invalid_argument("add_row: dimension mismatch");
  rows.push_back(std::move(coeffs));
  bounds.push_back(std::move(bound));
}

bool InstantiatedSystem::satisfies(const std::vector<Rat>& x) const {
  for (size_t r = 0; r < rows.size(); ++r) {
    Rat v(0);
    for (size_t j = 0; j < x.size(); ++j) v += rows[r][j] * x[j];
    if (v > bounds[r]) return false;
  }
  return true;
}

std::string InstantiatedSystem::to_json() const {
  nlohmann::json j;
  nlohmann::json vars = nlohmann::json::array();
  for (const auto& v : variables) vars.push_back(v.name());
  j["variables"] = vars;
  nlohmann::json rws = nlohmann::json::array();
  for (size_t r = 0; r < rows.size(); ++r) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& c : rows[r]) coeffs.push_back(to_string(c));
    rws.push_back({{"coeffs", coeffs}, {"bound", to_string(bounds[r])}});
  }
  j["rows"] = rws;
  return j.dump();
}

std::string FarkasCertificate::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [row, lam] : multipliers) j[std::to_string(row)] = to_string(lam);
  return j.dump();
}

bool verify_certificate(const InstantiatedSystem& system, const std::vector<Rat>& target_coeffs,
                        const Rat& target_bound, const FarkasCertificate& cert) {
  std::vector<Rat> combo(system.variables.size(), Rat(0));
  Rat rhs(0);
  for (const auto& [row, lam] : cert.multipliers) {
    if (lam < 0) return false;
    if (row < 0 || row >= static_cast<int>(system.rows.size())) return false;
    for (size_t j = 0; j < combo.size(); ++j) combo[j] += lam * system.rows[row][j];
    rhs += lam * system.bounds[row];
  }
  return combo == target_coeffs && rhs <= target_bound;
}

namespace {

// Dense tableau simplex over the rationals. Problem: max c.x, A x <= b,
// x free. Free variables are split x = xp - xm; slack and artificial
// columns complete the standard form. Bland's rule throughout.
class Simplex {
 public:
  Simplex(const InstantiatedSystem& sys) : m_(sys.rows.size()), n_(sys.variables.size()) {
    cols_ = 2 * n_ + 2 * m_;
    tab_.assign(m_, std::vector<Rat>(cols_ + 1, Rat(0)));
    sigma_.assign(m_, 1);
    basis_.resize(m_);
    for (size_t i = 0; i < m_; ++i) {
      int s = sys.bounds[i] < 0 ? -1 : 1;
      sigma_[i] = s;
      for (size_t j = 0; j < n_; ++j) {
        tab_[i][j] = s * sys.rows[i][j];
        tab_[i][n_ + j] = -tab_[i][j];
      }
      tab_[i][2 * n_ + i] = s;            // slack
      tab_[i][2 * n_ + m_ + i] = 1;       // artificial
      tab_[i][cols_] = s * sys.bounds[i];
      basis_[i] = 2 * n_ + m_ + i;
    }
  }

  // Returns true when a feasible basis was found.
  bool phase1() {
    std::vector<Rat> cost(cols_, Rat(0));
    for (size_t i = 0; i < m_; ++i) cost[2 * n_ + m_ + i] = -1;
    run(cost, /*allow_artificial=*/true);
    Rat obj(0);
    for (size_t i = 0; i < m_; ++i) obj += cost[basis_[i]] * tab_[i][cols_];
    phase1_cost_ = cost;
    if (obj != 0) return false;
    purge_artificials();
    return true;
  }

  // After a failed phase 1: nonnegative multipliers proving Ax <= b empty.
  std::vector<Rat> infeasibility_multipliers() {
    std::vector<Rat> y = duals(phase1_cost_);
    std::vector<Rat> lam(m_);
    // lam_i = sigma_i * y_i gives lam >= 0, lam'A = 0, lam'b < 0.
    for (size_t i = 0; i < m_; ++i) lam[i] = Rat(sigma_[i]) * y[i];
    return lam;
  }

  // Phase 2; objective over the original free variables.
  LpResult::Status phase2(const std::vector<Rat>& objective) {
    std::vector<Rat> cost(cols_, Rat(0));
    for (size_t j = 0; j < n_; ++j) {
      cost[j] = objective[j];
      cost[n_ + j] = -objective[j];
    }
    phase2_cost_ = cost;
    return run(cost, /*allow_artificial=*/false);
  }

  std::vector<Rat> point() const {
    std::vector<Rat> xp(2 * n_, Rat(0));
    for (size_t i = 0; i < m_; ++i)
      if (basis_[i] < 2 * n_) xp[basis_[i]] = tab_[i][cols_];
    std::vector<Rat> x(n_);
    for (size_t j = 0; j < n_; ++j) x[j] = xp[j] - xp[n_ + j];
    return x;
  }

  Rat objective_value(const std::vector<Rat>& objective) const {
    auto x = point();
    Rat v(0);
    for (size_t j = 0; j < n_; ++j) v += objective[j] * x[j];
    return v;
  }

  // Recession direction for the unbounded entering column found in phase 2.
  std::vector<Rat> ray() const {
    std::vector<Rat> d(2 * n_, Rat(0));
    if (unbounded_col_ < 2 * n_) d[unbounded_col_] = 1;
    for (size_t i = 0; i < m_; ++i)
      if (basis_[i] < 2 * n_) d[basis_[i]] -= tab_[i][unbounded_col_];
    std::vector<Rat> dir(n_);
    for (size_t j = 0; j < n_; ++j) dir[j] = d[j] - d[n_ + j];
    return dir;
  }

  // Multipliers for the original rows A_i x <= b_i at the phase-2 optimum.
  std::vector<Rat> row_multipliers() {
    std::vector<Rat> y = duals(phase2_cost_);
    std::vector<Rat> lam(m_);
    for (size_t i = 0; i < m_; ++i) lam[i] = Rat(sigma_[i]) * y[i];
    return lam;
  }

 private:
  // Pivots zero-level artificials out of the basis so they cannot creep
  // back to positive values during phase 2. Rows whose non-artificial
  // entries are all zero are redundant and stay inert.
  void purge_artificials() {
    for (size_t i = 0; i < m_; ++i) {
      if (basis_[i] < 2 * n_ + m_) continue;
      for (size_t j = 0; j < 2 * n_ + m_; ++j) {
        if (tab_[i][j] != 0) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  std::vector<Rat> duals(const std::vector<Rat>& cost) const {
    // y_i = c_basis . (column of artificial i in the current tableau),
    // shifted by the artificial's own cost.
    std::vector<Rat> y(m_, Rat(0));
    for (size_t i = 0; i < m_; ++i) {
      size_t art = 2 * n_ + m_ + i;
      Rat z(0);
      for (size_t r = 0; r < m_; ++r) z += cost[basis_[r]] * tab_[r][art];
      y[i] = z;
    }
    return y;
  }

  LpResult::Status run(const std::vector<Rat>& cost, bool allow_artificial) {
    for (;;) {
      // Reduced costs; Bland: first column that can improve.
      size_t enter = cols_;
      for (size_t j = 0; j < cols_; ++j) {
        if (!allow_artificial && j >= 2 * n_ + m_) break;
        if (std::find(basis_.begin(), basis_.end(), j) != basis_.end()) continue;
        Rat z(0);
        for (size_t i = 0; i < m_; ++i) z += cost[basis_[i]] * tab_[i][j];
        if (cost[j] - z > 0) {
          enter = j;
          break;
        }
      }
      if (enter == cols_) return LpResult::Status::Optimal;

      size_t leave = m_;
      Rat best_ratio(0);
      for (size_t i = 0; i < m_; ++i) {
        if (tab_[i][enter] <= 0) continue;
        Rat ratio = tab_[i][cols_] / tab_[i][enter];
        if (leave == m_ || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[leave]))
          leave = i, best_ratio = ratio;
      }
      if (leave == m_) {
        unbounded_col_ = enter;
        return LpResult::Status::Unbounded;
      }
      pivot(leave, enter);
    }
  }

  void pivot(size_t row, size_t col) {
    Rat p = tab_[row][col];
    for (size_t j = 0; j <= cols_; ++j) tab_[row][j] /= p;
    for (size_t i = 0; i < m_; ++i) {
      if (i == row || tab_[i][col] == 0) continue;
      Rat f = tab_[i][col];
      for (size_t j = 0; j <= cols_; ++j) tab_[i][j] -= f * tab_[row][j];
    }
    basis_[row] = col;
  }

  size_t m_, n_, cols_;
  std::vector<std::vector<Rat>> tab_;
  std::vector<int> sigma_;
  std::vector<size_t> basis_;
  std::vector<Rat> phase1_cost_, phase2_cost_;
  size_t unbounded_col_ = 0;
};

}  // namespace

LpResult maximize(const InstantiatedSystem& system, const std::vector<Rat>& objective) {
  if (objective.size() != system.variables.size())
    throw std::invalid_argument("maximize: objective dimension mismatch");
  LpResult res;
  if (system.rows.empty()) {
    // No constraints: unbounded unless the objective is zero.
    bool zero = std::all_of(objective.begin(), objective.end(), [](const Rat& c) { return c == 0; });
    res.point.assign(system.variables.size(), Rat(0));
    if (zero) {
      res.status = LpResult::Status::Optimal;
      res.value = 0;
    } else {
      res.status = LpResult::Status::Unbounded;
      res.ray = objective;
    }
    return res;
  }
  Simplex sx(system);
  if (!sx.phase1()) {
    res.status = LpResult::Status::Infeasible;
    return res;
  }
  res.status = sx.phase2(objective);
  res.point = sx.point();
  if (res.status == LpResult::Status::Unbounded) {
    res.ray = sx.ray();
    return res;
  }
  res.value = sx.objective_value(objective);
  res.duals = sx.row_multipliers();
  return res;
}

std::optional<std::vector<Rat>> feasible_point(const InstantiatedSystem& system) {
  std::vector<Rat> zero(system.variables.size(), Rat(0));
  LpResult r = maximize(system, zero);
  if (r.status == LpResult::Status::Infeasible) return std::nullopt;
  return r.point;
}

ImplyResult implies(const InstantiatedSystem& system, const std::vector<Rat>& target_coeffs,
                    const Rat& target_bound) {
  ImplyResult out;
  LpResult lp = maximize(system, target_coeffs);
  switch (lp.status) {
    case LpResult::Status::Infeasible:
      out.kind = ImplyResult::Kind::VacuousYes;
      return out;
    case LpResult::Status::Unbounded: {
      out.kind = ImplyResult::Kind::No;
      // Walk the ray far enough to violate the target.
      Rat along(0), at(0);
      for (size_t j = 0; j < target_coeffs.size(); ++j) {
        along += target_coeffs[j] * lp.ray[j];
        at += target_coeffs[j] * lp.point[j];
      }
      Rat t = (target_bound - at) / along + 1;
      if (t < 1) t = 1;
      out.witness = lp.point;
      for (size_t j = 0; j < out.witness.size(); ++j) out.witness[j] += t * lp.ray[j];
      return out;
    }
    case LpResult::Status::Optimal:
      break;
  }
  if (lp.value <= target_bound) {
    out.kind = ImplyResult::Kind::Yes;
    for (size_t i = 0; i < lp.duals.size(); ++i)
      if (lp.duals[i] != 0) out.certificate.multipliers[static_cast<int>(i)] = lp.duals[i];
    if (!verify_certificate(system, target_coeffs, target_bound, out.certificate))
      throw std::logic_error("implies: produced certificate failed exact re-check");
    return out;
  }
  out.kind = ImplyResult::Kind::No;
  out.witness = lp.point;
  return out;
}

CompareResult contains(const InstantiatedSystem& A, const InstantiatedSystem& B) {
  if (A.variables != B.variables)
    throw std::invalid_argument("contains: variable lists differ");
  CompareResult res;
  for (size_t r = 0; r < A.rows.size(); ++r) {
    ImplyResult imp = implies(B, A.rows[r], A.bounds[r]);
    if (imp.kind == ImplyResult::Kind::No) {
      res.holds = false;
      res.witness = std::move(imp.witness);
      res.failing_row = static_cast<int>(r);
      res.direction = "B";
      return res;
    }
  }
  res.holds = true;
  return res;
}

CompareResult equal(const InstantiatedSystem& A, const InstantiatedSystem& B) {
  CompareResult ab = contains(A, B);
  if (!ab.holds) {
    ab.direction = "B\\A";  // witness lies in B, outside A
    return ab;
  }
  CompareResult ba = contains(B, A);
  if (!ba.holds) {
    ba.direction = "A\\B";
    return ba;
  }
  CompareResult res;
  res.holds = true;
  return res;
}

}  // namespace secbc
