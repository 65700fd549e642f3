#pragma once

#include "secbc/region.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace secbc {

// A region evaluated at a concrete atom table: rows coeff . x <= bound
// over an ordered variable list, all rationals.
struct InstantiatedSystem {
  std::vector<RateSymbol> variables;
  std::vector<std::vector<Rat>> rows;
  std::vector<Rat> bounds;

  static InstantiatedSystem instantiate(const Region& region, const AtomTable& table);
  void add_row(std::vector<Rat> coeffs, Rat bound);
  bool satisfies(const std::vector<Rat>& x) const;
  std::string to_json() const;
};

// Nonnegative row multipliers whose combination dominates a target
// inequality. Re-checkable by exact arithmetic via verify_certificate.
struct FarkasCertificate {
  std::map<int, Rat> multipliers;
  std::string to_json() const;
};

bool verify_certificate(const InstantiatedSystem& system, const std::vector<Rat>& target_coeffs,
                        const Rat& target_bound, const FarkasCertificate& cert);

struct LpResult {
  enum class Status { Optimal, Unbounded, Infeasible };
  Status status = Status::Infeasible;
  Rat value;
  std::vector<Rat> point;   // optimizer (Optimal) or feasible point (Unbounded)
  std::vector<Rat> ray;     // improving recession direction (Unbounded)
  std::vector<Rat> duals;   // row multipliers, lambda >= 0 (Optimal)
};

// max objective . x subject to the system; exact rational simplex with
// Bland's rule.
LpResult maximize(const InstantiatedSystem& system, const std::vector<Rat>& objective);

std::optional<std::vector<Rat>> feasible_point(const InstantiatedSystem& system);

struct ImplyResult {
  enum class Kind { Yes, No, VacuousYes };
  Kind kind = Kind::No;
  FarkasCertificate certificate;  // Yes
  std::vector<Rat> witness;       // No: feasible point violating the target
};

ImplyResult implies(const InstantiatedSystem& system, const std::vector<Rat>& target_coeffs,
                    const Rat& target_bound);

struct CompareResult {
  bool holds = false;
  // On failure: a point of `witness_in` violating row `failing_row` of the
  // other system. direction is "A" or "B" naming the side that is larger.
  std::vector<Rat> witness;
  int failing_row = -1;
  std::string direction;
};

// A contains B: every row of A is implied by B.
CompareResult contains(const InstantiatedSystem& A, const InstantiatedSystem& B);
CompareResult equal(const InstantiatedSystem& A, const InstantiatedSystem& B);

}  // namespace secbc
