#pragma once

#include "secbc/atoms.hpp"
#include "secbc/rational.hpp"

#include <compare>
#include <map>
#include <string>
#include <vector>

namespace secbc {

// A rate symbol: the total rate R_k (part == 0) or a split component
// R_{k,part} with part in {1,2}.
struct RateSymbol {
  int k = 0;
  int part = 0;

  static RateSymbol total(int k) { return {k, 0}; }
  static RateSymbol split(int k, int part) { return {k, part}; }
  bool is_total() const { return part == 0; }

  auto operator<=>(const RateSymbol&) const = default;
  std::string name() const;  // "R3" or "R32"
};

// A linear combination of atoms plus a constant: the right-hand side of a
// rate bound. Keys are (j, m) atom indices.
struct RhsExpr {
  std::map<std::pair<int, int>, Rat> coeffs;
  Rat constant = 0;

  Rat eval(const AtomTable& table) const;
  RhsExpr& operator+=(const RhsExpr& o);
  RhsExpr& operator*=(const Rat& s);
  void prune_zeros();
  bool operator==(const RhsExpr&) const = default;
};

// lhs . R <= rhs, with rational coefficients. Canonical form has integer
// coefficients with gcd 1 across lhs, rhs coefficients and constant.
struct Inequality {
  std::map<RateSymbol, Rat> lhs;
  RhsExpr rhs;

  void normalize();
  std::string key() const;  // canonical text form, used for dedup
  bool operator==(const Inequality&) const = default;
};

struct Region {
  std::string label;
  std::vector<RateSymbol> variables;
  std::vector<Inequality> inequalities;

  // Normalizes and appends, dropping exact duplicates.
  void add(Inequality ineq);
  // Stored as the pair lhs <= rhs, -lhs <= -rhs.
  void add_equality(std::map<RateSymbol, Rat> lhs, RhsExpr rhs);
  void add_nonnegativity();  // -v <= 0 for every variable
  bool has_variable(const RateSymbol& v) const;

  std::string to_json() const;
};

// Theorem-1 capacity region over R_1..R_K.
// K + (K-1)(K-2)/2 inequalities; the secrecy family is empty for K = 2.
Region theorem1(int K, bool with_nonneg = false);

// The rate-split system after substituting the rate-sharing equalities,
// over R_1..R_K and the split symbols R_{2,2}, R_{k,1}, R_{k,2} (3<=k<=K).
// The sharing equalities for R_k (3<=k<=K) are kept as rows.
Region pre_elimination(int K, bool with_nonneg = false);

// The common structure of the intermediate region after eliminating
// (R_{k-1,2}, R_{k,1}), over R_1..R_k and R_{k,2}.
Region inductive_structure(int k, int K, bool with_nonneg = false);

enum class ReferenceKind { PropK3, PropK4, NaiveK4 };
ReferenceKind reference_kind_from_string(const std::string& s);

// The K=3 / K=4 closed-form regions with each min(A,B) bound expanded
// into the two linear bounds.
Region reference_region(ReferenceKind kind, bool with_nonneg = false);

}  // namespace secbc
