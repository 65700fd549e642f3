#include "secbc/channel.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace secbc {

namespace {

constexpr double kProbFloor = 1e-15;  // below this, 0 log 0 = 0

Matrix multiply(const Matrix& a, const Matrix& b) {
  size_t n = a.size(), k = b.size(), m = b[0].size();
  Matrix out(n, std::vector<double>(m, 0.0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < k; ++j)
      for (size_t c = 0; c < m; ++c) out[i][c] += a[i][j] * b[j][c];
  return out;
}

std::optional<std::string> check_stochastic(const Matrix& mat, const std::string& name,
                                            double tol) {
  if (mat.empty()) return name + ": empty matrix";
  for (size_t r = 0; r < mat.size(); ++r) {
    if (mat[r].size() != mat[0].size()) return name + ": ragged rows";
    double sum = 0;
    for (double v : mat[r]) {
      if (v < 0) return name + ": negative entry in row " + std::to_string(r);
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol)
      return name + ": row " + std::to_string(r) + " sums to " + std::to_string(sum);
  }
  return std::nullopt;
}

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& row : m) j.push_back(row);
  return j;
}

Matrix matrix_from_json(const nlohmann::json& j) {
  Matrix m;
  for (const auto& row : j) m.push_back(row.get<std::vector<double>>());
  return m;
}

}  // namespace

int ChannelCascade::y_size(int m) const {
  if (m < 1 || m > K) throw std::out_of_range("y_size: receiver out of range");
  // hops[0] outputs Y_K, hops[K-m] outputs Y_m.
  return static_cast<int>(hops[K - m][0].size());
}

Matrix ChannelCascade::to_receiver(int m) const {
  if (m < 1 || m > K) throw std::out_of_range("to_receiver: receiver out of range");
  Matrix acc = hops[0];
  for (int i = 1; i <= K - m; ++i) acc = multiply(acc, hops[i]);
  return acc;
}

std::string ChannelCascade::to_json() const {
  nlohmann::json j;
  j["K"] = K;
  j["x_size"] = x_size;
  nlohmann::json hj = nlohmann::json::array();
  for (size_t i = 0; i < hops.size(); ++i) {
    hj.push_back({{"to", "Y" + std::to_string(K - static_cast<int>(i))},
                  {"matrix", matrix_to_json(hops[i])}});
  }
  j["hops"] = hj;
  return j.dump();
}

ChannelCascade ChannelCascade::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ChannelCascade c;
  c.K = j.at("K").get<int>();
  c.x_size = j.at("x_size").get<int>();
  for (const auto& hop : j.at("hops")) c.hops.push_back(matrix_from_json(hop.at("matrix")));
  return c;
}

std::string AuxChain::to_json() const {
  nlohmann::json j;
  j["sizes"] = sizes;
  nlohmann::json dj = nlohmann::json::array();
  for (const auto& d : dists) dj.push_back(matrix_to_json(d));
  j["dists"] = dj;
  return j.dump();
}

AuxChain AuxChain::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  AuxChain a;
  a.sizes = j.at("sizes").get<std::vector<int>>();
  for (const auto& d : j.at("dists")) a.dists.push_back(matrix_from_json(d));
  return a;
}

std::optional<std::string> validate_cascade(const ChannelCascade& cascade, double tol) {
  if (cascade.K < 2) return "cascade: K must be >= 2";
  if (cascade.hops.size() != static_cast<size_t>(cascade.K))
    return "cascade: expected K hop matrices";
  if (static_cast<int>(cascade.hops[0].size()) != cascade.x_size)
    return "cascade: first hop must have x_size rows";
  for (size_t i = 0; i < cascade.hops.size(); ++i) {
    auto err = check_stochastic(cascade.hops[i], "hop " + std::to_string(i), tol);
    if (err) return err;
    if (i > 0 && cascade.hops[i].size() != cascade.hops[i - 1][0].size())
      return "cascade: hop " + std::to_string(i) + " input size mismatch";
  }
  return std::nullopt;
}

std::optional<std::string> validate_aux(const AuxChain& aux, const ChannelCascade& cascade,
                                        double tol) {
  if (aux.layers() != cascade.K - 1) return "aux: expected K-1 auxiliary variables";
  if (aux.dists.size() != static_cast<size_t>(cascade.K)) return "aux: expected K distributions";
  if (aux.dists[0].size() != 1) return "aux: P(U_1) must be a single row";
  for (size_t i = 0; i < aux.dists.size(); ++i) {
    auto err = check_stochastic(aux.dists[i], "aux dist " + std::to_string(i), tol);
    if (err) return err;
    int out_size = static_cast<int>(aux.dists[i][0].size());
    int expect = i + 1 < aux.dists.size() ? aux.sizes[i] : cascade.x_size;
    if (out_size != expect) return "aux dist " + std::to_string(i) + ": output size mismatch";
    if (i > 0 && static_cast<int>(aux.dists[i].size()) != aux.sizes[i - 1])
      return "aux dist " + std::to_string(i) + ": input size mismatch";
  }
  return std::nullopt;
}

int axis_of_u(int j, int K) {
  if (j < 1 || j > K) throw std::out_of_range("axis_of_u");
  return j - 1;  // U_K == X sits at axis K-1
}

int axis_of_y(int m, int K) {
  if (m < 1 || m > K) throw std::out_of_range("axis_of_y");
  return K - 1 + m;
}

JointDist joint(const ChannelCascade& cascade, const AuxChain& aux) {
  if (auto err = validate_cascade(cascade)) throw std::invalid_argument(*err);
  if (auto err = validate_aux(aux, cascade)) throw std::invalid_argument(*err);
  const int K = cascade.K;

  JointDist dist;
  dist.dims.reserve(2 * K);
  for (int j = 0; j < K - 1; ++j) dist.dims.push_back(aux.sizes[j]);
  dist.dims.push_back(cascade.x_size);
  for (int m = 1; m <= K; ++m) dist.dims.push_back(cascade.y_size(m));

  size_t total = 1;
  for (int d : dist.dims) total *= d;
  dist.p.assign(total, 0.0);

  std::vector<int> idx(dist.dims.size(), 0);
  for (size_t flat = 0; flat < total; ++flat) {
    double p = aux.dists[0][0][idx[0]];
    for (int j = 1; j < K; ++j) p *= aux.dists[j][idx[j - 1]][idx[j]];
    // idx[K-1] is x; Y axes run y_1..y_K at K..2K-1.
    p *= cascade.hops[0][idx[K - 1]][idx[2 * K - 1]];
    for (int i = 1; i < K; ++i) p *= cascade.hops[i][idx[2 * K - i]][idx[2 * K - i - 1]];
    dist.p[flat] = p;

    for (int ax = static_cast<int>(idx.size()) - 1; ax >= 0; --ax) {
      if (++idx[ax] < dist.dims[ax]) break;
      idx[ax] = 0;
    }
  }
  return dist;
}

double JointDist::sum() const { return std::accumulate(p.begin(), p.end(), 0.0); }

JointDist JointDist::marginal(const std::vector<int>& axes) const {
  JointDist out;
  for (int ax : axes) out.dims.push_back(dims[ax]);
  size_t total = 1;
  for (int d : out.dims) total *= d;
  out.p.assign(total, 0.0);

  std::vector<int> idx(dims.size(), 0);
  for (size_t flat = 0; flat < p.size(); ++flat) {
    size_t sub = 0;
    for (int ax : axes) sub = sub * dims[ax] + idx[ax];
    out.p[sub] += p[flat];
    for (int ax = static_cast<int>(idx.size()) - 1; ax >= 0; --ax) {
      if (++idx[ax] < dims[ax]) break;
      idx[ax] = 0;
    }
  }
  return out;
}

double conditional_mi(const JointDist& dist, const std::vector<int>& A, const std::vector<int>& B,
                      const std::vector<int>& C) {
  auto concat = [](std::vector<int> a, const std::vector<int>& b) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    return a;
  };
  // I(A;B|C) = H(AC) + H(BC) - H(ABC) - H(C)
  auto entropy = [](const JointDist& d) {
    double h = 0;
    for (double v : d.p)
      if (v > kProbFloor) h -= v * std::log2(v);
    return h;
  };
  double h_ac = entropy(dist.marginal(concat(A, C)));
  double h_bc = entropy(dist.marginal(concat(B, C)));
  double h_abc = entropy(dist.marginal(concat(concat(A, B), C)));
  double h_c = C.empty() ? 0.0 : entropy(dist.marginal(C));
  return h_ac + h_bc - h_abc - h_c;
}

AtomTable atoms_from_channel(const ChannelCascade& cascade, const AuxChain& aux) {
  const int K = cascade.K;
  JointDist dist = joint(cascade, aux);
  AtomTable t(K, AtomTable::Mode::Float);
  for (int j = 1; j <= K; ++j) {
    std::vector<int> cond;
    if (j > 1) cond.push_back(axis_of_u(j - 1, K));
    for (int m = 1; m <= K; ++m) {
      double v = conditional_mi(dist, {axis_of_u(j, K)}, {axis_of_y(m, K)}, cond);
      t.fat(j, m) = v < 0 && v > -1e-12 ? 0.0 : v;
    }
  }
  return t;
}

Matrix identity_matrix(int n) {
  Matrix m(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) m[i][i] = 1.0;
  return m;
}

Matrix bsc_matrix(double crossover) {
  return {{1.0 - crossover, crossover}, {crossover, 1.0 - crossover}};
}

ChannelCascade bsc_cascade(int K, const std::vector<double>& crossovers) {
  if (crossovers.size() != static_cast<size_t>(K))
    throw std::invalid_argument("bsc_cascade: need one crossover per hop");
  ChannelCascade c;
  c.K = K;
  c.x_size = 2;
  for (double p : crossovers) c.hops.push_back(bsc_matrix(p));
  return c;
}

}  // namespace secbc
