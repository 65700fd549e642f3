#include "secbc/fme.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <stdexcept>

namespace secbc {

EliminationSchedule EliminationSchedule::for_K(int K) {
  if (K < 3) throw std::invalid_argument("EliminationSchedule: K must be >= 3");
  EliminationSchedule s;
  for (int k = 3; k <= K - 1; ++k)
    s.groups.push_back({RateSymbol::split(k - 1, 2), RateSymbol::split(k, 1)});
  s.groups.push_back(
      {RateSymbol::split(K - 1, 2), RateSymbol::split(K, 1), RateSymbol::split(K, 2)});
  return s;
}

std::vector<RateSymbol> EliminationSchedule::flat() const {
  std::vector<RateSymbol> all;
  for (const auto& g : groups) all.insert(all.end(), g.begin(), g.end());
  return all;
}

namespace {

Inequality combine(const Inequality& a, const Rat& sa, const Inequality& b, const Rat& sb) {
  Inequality out;
  for (const auto& [s, c] : a.lhs) out.lhs[s] += sa * c;
  for (const auto& [s, c] : b.lhs) out.lhs[s] += sb * c;
  out.rhs = a.rhs;
  out.rhs *= sa;
  RhsExpr rb = b.rhs;
  rb *= sb;
  out.rhs += rb;
  return out;
}

// True for rows 0 <= e where e is a nonnegative atom combination with a
// nonnegative constant; such rows hold at every valid table.
bool trivially_true(const Inequality& iq) {
  if (!iq.lhs.empty()) return false;
  if (iq.rhs.constant < 0) return false;
  for (const auto& [jm, c] : iq.rhs.coeffs)
    if (c < 0) return false;
  return true;
}

// rhs difference is provably nonnegative under atom nonnegativity.
bool rhs_dominates(const RhsExpr& loose, const RhsExpr& tight) {
  if (loose.constant < tight.constant) return false;
  Rat dc = loose.constant - tight.constant;
  RhsExpr diff = loose;
  for (const auto& [jm, c] : tight.coeffs) diff.coeffs[jm] -= c;
  for (const auto& [jm, c] : diff.coeffs)
    if (c < 0) return false;
  return dc >= 0;
}

}  // namespace

Region eliminate(Region region, const RateSymbol& var) {
  if (!region.has_variable(var))
    throw std::invalid_argument("eliminate: variable " + var.name() + " not in region");

  Region out;
  out.label = region.label;
  for (const auto& v : region.variables)
    if (v != var) out.variables.push_back(v);

  std::vector<const Inequality*> pos, neg;
  for (const auto& iq : region.inequalities) {
    auto it = iq.lhs.find(var);
    if (it == iq.lhs.end() || it->second == 0) {
      if (!trivially_true(iq)) out.add(iq);
    } else if (it->second > 0) {
      pos.push_back(&iq);
    } else {
      neg.push_back(&iq);
    }
  }
  for (const Inequality* p : pos) {
    Rat alpha = p->lhs.at(var);
    for (const Inequality* n : neg) {
      Rat gamma = -n->lhs.at(var);
      Inequality combo = combine(*p, gamma, *n, alpha);
      combo.lhs.erase(var);
      if (!trivially_true(combo)) out.add(std::move(combo));
    }
  }

  // Imbert-style dominance: among rows with identical lhs, keep only the
  // tightest under atom nonnegativity.
  std::vector<bool> dead(out.inequalities.size(), false);
  auto lhs_key = [](const Inequality& iq) {
    std::string k;
    for (const auto& [s, c] : iq.lhs) k += s.name() + ":" + to_string(c) + ";";
    return k;
  };
  for (size_t i = 0; i < out.inequalities.size(); ++i) {
    if (dead[i]) continue;
    for (size_t j = 0; j < out.inequalities.size(); ++j) {
      if (i == j || dead[j] || dead[i]) continue;
      if (lhs_key(out.inequalities[i]) != lhs_key(out.inequalities[j])) continue;
      if (rhs_dominates(out.inequalities[j].rhs, out.inequalities[i].rhs)) dead[j] = true;
    }
  }
  Region pruned;
  pruned.label = out.label;
  pruned.variables = out.variables;
  for (size_t i = 0; i < out.inequalities.size(); ++i)
    if (!dead[i]) pruned.inequalities.push_back(std::move(out.inequalities[i]));
  return pruned;
}

Region lp_prune(Region region, const AtomTable& table) {
  InstantiatedSystem full = InstantiatedSystem::instantiate(region, table);
  std::vector<bool> alive(region.inequalities.size(), true);
  for (size_t r = 0; r < region.inequalities.size(); ++r) {
    InstantiatedSystem rest;
    rest.variables = full.variables;
    for (size_t i = 0; i < alive.size(); ++i)
      if (alive[i] && i != r) rest.add_row(full.rows[i], full.bounds[i]);
    ImplyResult imp = implies(rest, full.rows[r], full.bounds[r]);
    if (imp.kind != ImplyResult::Kind::No) alive[r] = false;
  }
  Region out;
  out.label = region.label;
  out.variables = region.variables;
  for (size_t i = 0; i < alive.size(); ++i)
    if (alive[i]) out.inequalities.push_back(std::move(region.inequalities[i]));
  return out;
}

Region project(Region region, const EliminationSchedule& schedule, const AtomTable* table,
               PruneMode prune) {
  if (prune == PruneMode::Lp && table == nullptr)
    throw std::invalid_argument("project: LP pruning requires an atom table");
  for (const auto& group : schedule.groups) {
    for (const auto& var : group) region = eliminate(std::move(region), var);
    if (prune == PruneMode::Lp) region = lp_prune(std::move(region), *table);
  }
  return region;
}

namespace {

// Rows of `region` supported entirely on `vars`, as a region over exactly
// that variable list.
Region subregion(const Region& region, const std::vector<RateSymbol>& vars) {
  Region out;
  out.label = region.label + " | subsystem";
  out.variables = vars;
  for (const auto& iq : region.inequalities) {
    bool ok = true;
    for (const auto& [s, c] : iq.lhs)
      if (std::find(vars.begin(), vars.end(), s) == vars.end()) {
        ok = false;
        break;
      }
    if (ok) out.inequalities.push_back(iq);
  }
  return out;
}

}  // namespace

VerifyReport inductive_verify(int K, const AtomTable& table, bool with_nonneg) {
  VerifyReport report;
  Region region = pre_elimination(K, with_nonneg);
  int step = 0;

  auto record = [&](const Region& current, const Region& target, int rows_before) {
    VerifyStep vs;
    vs.step = ++step;
    vs.intermediate_label = target.label;
    vs.rows_before = rows_before;
    vs.rows_after = static_cast<int>(current.inequalities.size());
    Region sub = subregion(current, target.variables);
    CompareResult cmp = equal(InstantiatedSystem::instantiate(sub, table),
                              InstantiatedSystem::instantiate(target, table));
    vs.equal = cmp.holds;
    if (!cmp.holds) {
      vs.witness = cmp.witness;
      report.all_passed = false;
    }
    report.steps.push_back(std::move(vs));
  };

  // The structure claim covers the pair steps k = 3..K-1; the final step
  // removes the last three split rates together and lands on Theorem 1.
  for (int k = 3; k <= K - 1; ++k) {
    int rows_before = static_cast<int>(region.inequalities.size());
    region = eliminate(std::move(region), RateSymbol::split(k - 1, 2));
    region = eliminate(std::move(region), RateSymbol::split(k, 1));
    region = lp_prune(std::move(region), table);
    record(region, inductive_structure(k, K, with_nonneg), rows_before);
  }
  {
    int rows_before = static_cast<int>(region.inequalities.size());
    for (const auto& var : {RateSymbol::split(K - 1, 2), RateSymbol::split(K, 1),
                            RateSymbol::split(K, 2)})
      region = eliminate(std::move(region), var);
    region = lp_prune(std::move(region), table);
    record(region, theorem1(K, with_nonneg), rows_before);
  }
  return report;
}

std::string VerifyReport::to_json() const {
  nlohmann::json j;
  j["all_passed"] = all_passed;
  nlohmann::json steps_json = nlohmann::json::array();
  for (const auto& s : steps) {
    nlohmann::json sj;
    sj["step"] = s.step;
    sj["intermediate_label"] = s.intermediate_label;
    sj["equal"] = s.equal;
    if (s.witness) {
      nlohmann::json w = nlohmann::json::array();
      for (const auto& v : *s.witness) w.push_back(to_string(v));
      sj["witness"] = w;
    } else {
      sj["witness"] = nullptr;
    }
    sj["rows_before"] = s.rows_before;
    sj["rows_after"] = s.rows_after;
    steps_json.push_back(sj);
  }
  j["steps"] = steps_json;
  return j.dump();
}

}  // namespace secbc
