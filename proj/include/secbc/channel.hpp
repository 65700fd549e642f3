#pragma once

#include "secbc/atoms.hpp"

#include <optional>
#include <string>
#include <vector>

namespace secbc {

using Matrix = std::vector<std::vector<double>>;  // row-stochastic

// Degraded broadcast channel given in cascade form: P(Y_K|X) followed by
// the downgrading hops P(Y_{k-1}|Y_k). Degradedness holds by construction.
struct ChannelCascade {
  int K = 0;
  int x_size = 0;
  std::vector<Matrix> hops;  // hops[0]: X -> Y_K, hops[i]: Y_{K-i+1} -> Y_{K-i}

  int y_size(int m) const;  // alphabet of receiver m (1-based)
  // Composed transition matrix X -> Y_m.
  Matrix to_receiver(int m) const;

  std::string to_json() const;
  static ChannelCascade from_json(const std::string& text);
};

// Auxiliary-variable chain U_1 -> ... -> U_{K-1} -> X.
struct AuxChain {
  std::vector<int> sizes;     // |U_1| .. |U_{K-1}|
  std::vector<Matrix> dists;  // P(U_1) (single row), P(U_2|U_1), ..., P(X|U_{K-1})

  int layers() const { return static_cast<int>(sizes.size()); }
  std::string to_json() const;
  static AuxChain from_json(const std::string& text);
};

std::optional<std::string> validate_cascade(const ChannelCascade& cascade, double tol = 1e-12);
std::optional<std::string> validate_aux(const AuxChain& aux, const ChannelCascade& cascade,
                                        double tol = 1e-12);

// Full joint distribution over (U_1..U_{K-1}, X, Y_1..Y_K), stored flat in
// row-major order with that axis ordering.
struct JointDist {
  std::vector<int> dims;
  std::vector<double> p;

  // Marginal over the given axis subset (ascending order of axes).
  JointDist marginal(const std::vector<int>& axes) const;
  double sum() const;
};

JointDist joint(const ChannelCascade& cascade, const AuxChain& aux);

// I(A; B | C) in bits from the joint, with A/B/C disjoint axis sets.
double conditional_mi(const JointDist& dist, const std::vector<int>& A,
                      const std::vector<int>& B, const std::vector<int>& C);

// Axis helpers for the joint layout: U_j at j-1 (j < K), X at K-1,
// Y_m at K-1+m.
int axis_of_u(int j, int K);  // U_K maps to the X axis
int axis_of_y(int m, int K);

// Float-mode table with a[j,m] = I(U_j;Y_m|U_{j-1}).
AtomTable atoms_from_channel(const ChannelCascade& cascade, const AuxChain& aux);

// Convenience constructors used by tests and the CLI.
Matrix identity_matrix(int n);
Matrix bsc_matrix(double crossover);
ChannelCascade bsc_cascade(int K, const std::vector<double>& crossovers);

}  // namespace secbc
