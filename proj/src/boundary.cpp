#include "secbc/boundary.hpp"

#include "secbc/polytope.hpp"
#include "secbc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace secbc {

namespace {

constexpr double kRecheckTol = 1e-9;

// Entropy arithmetic leaves noise of order 1e-13 around exact ties
// (identical receivers), which to_rational would reject. Repair anything
// within the re-check tolerance before rationalizing.
AtomTable repaired(AtomTable t) {
  const int K = t.K();
  for (int j = 1; j <= K; ++j) {
    for (int m = 1; m <= K; ++m) {
      double& v = t.fat(j, m);
      if (v < 0) {
        if (v < -kRecheckTol) throw std::runtime_error("boundary: negative atom beyond tolerance");
        v = 0;
      }
      if (m > 1 && v < t.fat(j, m - 1)) {
        if (t.fat(j, m - 1) - v > kRecheckTol)
          throw std::runtime_error("boundary: monotonicity violated beyond tolerance");
        v = t.fat(j, m - 1);
      }
    }
  }
  return t;
}

struct Evaluation {
  double value = 0.0;
  std::vector<double> rates;
};

Evaluation evaluate(const ChannelCascade& cascade, const AuxChain& aux,
                    const std::vector<double>& mu) {
  const int K = cascade.K;
  AtomTable ft = repaired(atoms_from_channel(cascade, aux));
  AtomTable rt = ft.to_rational();

  static thread_local int cached_K = -1;
  static thread_local Region cached_region;
  if (cached_K != K) {
    cached_region = theorem1(K, /*with_nonneg=*/true);
    cached_K = K;
  }
  InstantiatedSystem sys = InstantiatedSystem::instantiate(cached_region, rt);

  std::vector<Rat> objective(sys.variables.size());
  for (size_t i = 0; i < sys.variables.size(); ++i)
    objective[i] = rationalize(mu[sys.variables[i].k - 1]);

  LpResult lp = maximize(sys, objective);
  if (lp.status != LpResult::Status::Optimal)
    throw std::runtime_error("boundary: inner LP not optimal (region should be a polytope)");

  Evaluation ev;
  ev.value = lp.value.convert_to<double>();
  ev.rates.resize(K, 0.0);
  for (size_t i = 0; i < sys.variables.size(); ++i)
    ev.rates[sys.variables[i].k - 1] = lp.point[i].convert_to<double>();

  // Re-check the rate point against the float table.
  for (const auto& iq : cached_region.inequalities) {
    double lhs = 0, rhs = iq.rhs.constant.convert_to<double>();
    for (const auto& [s, c] : iq.lhs) lhs += c.convert_to<double>() * ev.rates[s.k - 1];
    for (const auto& [jm, c] : iq.rhs.coeffs)
      rhs += c.convert_to<double>() * ft.fat(jm.first, jm.second);
    if (lhs > rhs + kRecheckTol)
      throw std::runtime_error("boundary: optimized rate point fails float re-check");
  }
  return ev;
}

AuxChain uniform_chain(const ChannelCascade& cascade, const std::vector<int>& sizes) {
  AuxChain aux;
  aux.sizes = sizes;
  const int K = cascade.K;
  int prev = 1;
  for (int i = 0; i < K; ++i) {
    int out = i < K - 1 ? sizes[i] : cascade.x_size;
    aux.dists.push_back(Matrix(prev, std::vector<double>(out, 1.0 / out)));
    prev = out;
  }
  return aux;
}

std::vector<double> dirichlet_row(std::mt19937_64& rng, int n) {
  std::exponential_distribution<double> exp1(1.0);
  std::vector<double> row(n);
  double sum = 0;
  for (double& v : row) sum += (v = exp1(rng));
  for (double& v : row) v /= sum;
  return row;
}

AuxChain random_chain(const ChannelCascade& cascade, const std::vector<int>& sizes,
                      std::mt19937_64& rng) {
  AuxChain aux = uniform_chain(cascade, sizes);
  for (auto& dist : aux.dists)
    for (auto& row : dist) row = dirichlet_row(rng, static_cast<int>(row.size()));
  return aux;
}

std::vector<double> mix(const std::vector<double>& row, const std::vector<double>& target,
                        double step) {
  std::vector<double> out(row.size());
  for (size_t i = 0; i < row.size(); ++i) out[i] = (1 - step) * row[i] + step * target[i];
  return out;
}

}  // namespace

BoundaryResult maximize_weighted(const BoundaryQuery& query) {
  const int K = query.cascade.K;
  if (auto err = validate_cascade(query.cascade)) throw std::invalid_argument(*err);
  if (static_cast<int>(query.aux_sizes.size()) != K - 1)
    throw std::invalid_argument("boundary: need K-1 aux alphabet sizes");
  if (static_cast<int>(query.weights.size()) != K)
    throw std::invalid_argument("boundary: need K weights");
  bool any = false;
  for (double w : query.weights) {
    if (w < 0) throw std::invalid_argument("boundary: weights must be nonnegative");
    if (w > 0) any = true;
  }
  if (!any) throw std::invalid_argument("boundary: all weights are zero");

  const OptimizerConfig& opt = query.opt;
  BoundaryResult best;
  best.value = -1;

  for (int restart = 0; restart < std::max(1, opt.restarts); ++restart) {
    std::mt19937_64 rng = make_stream(opt.seed, static_cast<std::uint64_t>(restart));
    AuxChain aux = restart == 0 ? uniform_chain(query.cascade, query.aux_sizes)
                                : random_chain(query.cascade, query.aux_sizes, rng);
    Evaluation cur = evaluate(query.cascade, aux, query.weights);

    double step = opt.step_init;
    for (int pass = 0; pass < opt.max_passes && step >= opt.step_min; ++pass) {
      bool improved = false;
      for (size_t d = 0; d < aux.dists.size(); ++d) {
        for (size_t r = 0; r < aux.dists[d].size(); ++r) {
          std::vector<double>& row = aux.dists[d][r];
          const int n = static_cast<int>(row.size());

          std::vector<std::vector<double>> candidates;
          for (int c = 0; c < n; ++c) {
            std::vector<double> corner(n, 0.0);
            corner[c] = 1.0;
            candidates.push_back(corner);  // exact vertex snap
            candidates.push_back(mix(row, corner, step));
          }
          candidates.push_back(std::vector<double>(n, 1.0 / n));
          candidates.push_back(mix(row, dirichlet_row(rng, n), step));

          std::vector<double> saved = row;
          for (auto& cand : candidates) {
            row = cand;
            Evaluation ev = evaluate(query.cascade, aux, query.weights);
            if (ev.value > cur.value + 1e-12) {
              cur = ev;
              saved = row;
              improved = true;
            }
          }
          row = saved;
        }
      }
      if (!improved) step *= opt.step_decay;
    }

    if (cur.value > best.value) {
      best.value = cur.value;
      best.rates = cur.rates;
      best.aux = aux;
    }
  }
  return best;
}

std::string sweep_csv(const BoundaryQuery& query_template,
                      const std::vector<std::vector<double>>& weight_list) {
  const int K = query_template.cascade.K;
  std::ostringstream out;
  for (int k = 1; k <= K; ++k) out << "mu_" << k << ",";
  for (int k = 1; k <= K; ++k) out << "R_" << k << ",";
  out << "value\n";
  out.precision(12);
  for (const auto& mu : weight_list) {
    BoundaryQuery q = query_template;
    q.weights = mu;
    BoundaryResult res = maximize_weighted(q);
    for (int k = 0; k < K; ++k) out << mu[k] << ",";
    for (int k = 0; k < K; ++k) out << res.rates[k] << ",";
    out << res.value << "\n";
  }
  return out.str();
}

}  // namespace secbc
