#pragma once

#include "secbc/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace secbc {

// K x K table of the elementary mutual-information quantities
// a[j,m] = I(U_j; Y_m | U_{j-1}), 1 <= j,m <= K, with U_0 constant and
// U_K = X. Rational entries drive the exact polyhedral pipeline; float
// entries come from concrete channels.
class AtomTable {
 public:
  enum class Mode { Rational, Float };

  AtomTable(int K, Mode mode);

  int K() const { return K_; }
  Mode mode() const { return mode_; }

  const Rat& at(int j, int m) const;
  Rat& at(int j, int m);
  double fat(int j, int m) const;
  double& fat(int j, int m);

  // I(U_k; Y_m | U_l) = sum_{j=l+1}^{k} a[j,m]; zero when l == k.
  Rat compound(int l, int k, int m) const;
  double fcompound(int l, int k, int m) const;

  // First violated invariant, or nullopt if the table is valid.
  // tol is used in float mode; rational mode checks exactly.
  std::optional<std::string> validate(double tol = 0.0) const;

  // Rounds a float table to denominators 2^bits. Re-checks the invariants
  // after rounding: violations within 2^-bits are clamped away, anything
  // larger throws.
  AtomTable to_rational(unsigned bits = 40) const;

  std::string to_json() const;
  static AtomTable from_json(const std::string& text);

 private:
  void check_index(int j, int m) const;

  int K_;
  Mode mode_;
  std::vector<Rat> rvals_;
  std::vector<double> fvals_;
};

// Deterministic valid rational table: entries in [0,2] with denominators
// <= denominator_bound, each row sorted so a[j,m] is weakly increasing in m.
AtomTable random_table(int K, std::uint64_t seed, std::uint64_t denominator_bound);

}  // namespace secbc
