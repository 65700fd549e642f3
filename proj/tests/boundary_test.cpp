#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "secbc/boundary.hpp"

#include <cmath>
#include <sstream>

using namespace secbc;

namespace {

BoundaryQuery base_query(std::vector<Matrix> hops) {
  BoundaryQuery q;
  q.cascade.K = 3;
  q.cascade.x_size = 2;
  q.cascade.hops = std::move(hops);
  q.aux_sizes = {2, 2};
  q.opt.restarts = 5;
  q.opt.seed = 7;
  return q;
}

double h2(double p) { return -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

}  // namespace

TEST_CASE("identity channel, equal weights: full sum rate of one bit") {
  BoundaryQuery q = base_query({identity_matrix(2), identity_matrix(2), identity_matrix(2)});
  q.weights = {1, 1, 1};
  BoundaryResult r = maximize_weighted(q);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-6));
  // secrecy forces the last message rate to zero when receivers coincide
  CHECK(r.rates[2] <= 1e-9);
}

TEST_CASE("useless bottom receiver, noiseless top pair: R3 reaches one bit") {
  BoundaryQuery q = base_query({identity_matrix(2), identity_matrix(2), bsc_matrix(0.5)});
  q.weights = {0, 0, 1};
  q.opt.restarts = 3;
  BoundaryResult r = maximize_weighted(q);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("single-message weight on a BSC(0.1) end-to-end chain") {
  BoundaryQuery q = base_query({identity_matrix(2), identity_matrix(2), bsc_matrix(0.1)});
  q.weights = {1, 0, 0};
  q.opt.restarts = 8;
  BoundaryResult r = maximize_weighted(q);
  CHECK(r.value == doctest::Approx(1 - h2(0.1)).epsilon(1e-4));
}

TEST_CASE("identical receivers collapse the secrecy-bounded rate to zero") {
  BoundaryQuery q = base_query({bsc_matrix(0.1), identity_matrix(2), identity_matrix(2)});
  q.weights = {0, 0, 1};
  q.opt.restarts = 4;
  BoundaryResult r = maximize_weighted(q);
  CHECK(r.value <= 1e-9);
}

TEST_CASE("deterministic in seed; monotone in restarts") {
  BoundaryQuery q = base_query({identity_matrix(2), bsc_matrix(0.05), bsc_matrix(0.1)});
  q.weights = {1, 1, 0.5};
  q.opt.restarts = 1;
  BoundaryResult one = maximize_weighted(q);
  BoundaryResult one_again = maximize_weighted(q);
  CHECK(one.value == one_again.value);
  q.opt.restarts = 4;
  BoundaryResult four = maximize_weighted(q);
  CHECK(four.value >= one.value);
}

TEST_CASE("invalid queries are rejected") {
  BoundaryQuery q = base_query({identity_matrix(2), identity_matrix(2), identity_matrix(2)});
  q.weights = {0, 0, 0};
  CHECK_THROWS(maximize_weighted(q));
  q.weights = {1, -1, 0};
  CHECK_THROWS(maximize_weighted(q));
  q.weights = {1, 0};
  CHECK_THROWS(maximize_weighted(q));
  q.weights = {1, 0, 0};
  q.aux_sizes = {2};
  CHECK_THROWS(maximize_weighted(q));
}

TEST_CASE("sweep: header, row count, and the identity-channel values") {
  BoundaryQuery q = base_query({identity_matrix(2), identity_matrix(2), identity_matrix(2)});
  q.weights = {1, 1, 1};
  q.opt.restarts = 3;
  std::string csv = sweep_csv(q, {{1, 1, 1}, {1, 0, 0}, {0, 0, 1}});
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "mu_1,mu_2,mu_3,R_1,R_2,R_3,value");
  int rows = 0;
  double last_value = -1;
  while (std::getline(in, line)) {
    ++rows;
    last_value = std::stod(line.substr(line.rfind(',') + 1));
  }
  CHECK(rows == 3);
  CHECK(last_value <= 1e-9);  // mu=(0,0,1) on identical receivers

  CHECK(sweep_csv(q, {}) == "mu_1,mu_2,mu_3,R_1,R_2,R_3,value\n");
}
