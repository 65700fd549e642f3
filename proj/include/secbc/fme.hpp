#pragma once

#include "secbc/polytope.hpp"
#include "secbc/region.hpp"

#include <optional>
#include <string>
#include <vector>

namespace secbc {

// Ordered variable groups for the inductive elimination: the pairs
// (R_{k-1,2}, R_{k,1}) for 3 <= k <= K-1, then the final triple
// (R_{K-1,2}, R_{K,1}, R_{K,2}).
struct EliminationSchedule {
  std::vector<std::vector<RateSymbol>> groups;
  static EliminationSchedule for_K(int K);
  std::vector<RateSymbol> flat() const;
};

// One Fourier-Motzkin step: drops `var`, combining each upper/lower bound
// pair exactly. Syntactic duplicates, dominated rows and trivially-true
// rows are removed.
Region eliminate(Region region, const RateSymbol& var);

enum class PruneMode { Syntactic, Lp };

// Applies the schedule group by group; with PruneMode::Lp, rows implied by
// the rest of the system under `table` are dropped after each group.
Region project(Region region, const EliminationSchedule& schedule,
               const AtomTable* table = nullptr, PruneMode prune = PruneMode::Syntactic);

// Drops every row that is LP-implied by the remaining rows at `table`.
Region lp_prune(Region region, const AtomTable& table);

struct VerifyStep {
  int step = 0;
  std::string intermediate_label;
  bool equal = false;
  std::optional<std::vector<Rat>> witness;
  int rows_before = 0;
  int rows_after = 0;
};

struct VerifyReport {
  bool all_passed = true;
  std::vector<VerifyStep> steps;
  std::string to_json() const;
};

// Runs the inductive elimination on pre_elimination(K) at `table`,
// comparing each intermediate region against inductive_structure(k, K) and
// the final region against theorem1(K), all as instantiated polytopes.
VerifyReport inductive_verify(int K, const AtomTable& table, bool with_nonneg);

}  // namespace secbc
