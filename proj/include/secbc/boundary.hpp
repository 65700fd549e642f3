#pragma once

#include "secbc/channel.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace secbc {

struct OptimizerConfig {
  int restarts = 10;
  int max_passes = 120;     // coordinate-ascent sweeps per restart
  double step_init = 0.5;   // mixing weight toward a candidate target row
  double step_decay = 0.5;  // applied after a sweep with no improvement
  double step_min = 1e-3;
  std::uint64_t seed = 0;
};

// Weighted-sum-rate query: maximize mu . R over the capacity region of
// `cascade`, searching over auxiliary chains with the given alphabet sizes.
struct BoundaryQuery {
  ChannelCascade cascade;
  std::vector<int> aux_sizes;   // |U_1| .. |U_{K-1}|
  std::vector<double> weights;  // mu_1 .. mu_K, >= 0, not all zero
  OptimizerConfig opt;
};

// Best achievable point found. The outer search is a heuristic, so `value`
// is a lower bound on the true optimum.
struct BoundaryResult {
  double value = 0.0;
  std::vector<double> rates;
  AuxChain aux;
};

// Inner problem: exact LP over the K-receiver rate region (nonnegativity
// on) at the channel's atom table. Outer problem: coordinate ascent over
// simplex rows of the aux chain with random restarts; deterministic in
// opt.seed. The returned rate point is re-checked against the float atom
// table within 1e-9.
BoundaryResult maximize_weighted(const BoundaryQuery& query);

// One maximize_weighted run per weight vector. Returns a CSV table with
// header mu_1..mu_K,R_1..R_K,value.
std::string sweep_csv(const BoundaryQuery& query_template,
                      const std::vector<std::vector<double>>& weight_list);

}  // namespace secbc
