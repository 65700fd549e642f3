#include "secbc/simulator.hpp"

#include "secbc/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace secbc {

namespace {

int sample_row(const std::vector<double>& row, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double u = unif(rng), acc = 0;
  for (size_t i = 0; i < row.size(); ++i) {
    acc += row[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(row.size()) - 1;
}

std::uint64_t checked_pow(std::uint64_t base, int exp, std::uint64_t cap) {
  std::uint64_t v = 1;
  for (int i = 0; i < exp; ++i) {
    if (v > cap / base) return cap + 1;
    v *= base;
  }
  return v;
}

constexpr std::uint64_t kEnumCap = std::uint64_t{1} << 20;  // per-axis y^n cap

}  // namespace

int CodeParams::message_size(int k) const {
  if (k == 1) return M1;
  return layers[k - 2].messages();
}

int CodeParams::randomization_size(int k) const { return k <= 2 ? 1 : layers[k - 2].m3; }

std::uint64_t CodeParams::total_codewords() const {
  std::uint64_t t = M1;
  for (const auto& l : layers) t *= l.codewords();
  return t;
}

double CodeParams::rate(int k) const { return std::log2(message_size(k)) / n; }

std::optional<std::string> CodeParams::validate() const {
  if (K < 2) return "params: K must be >= 2";
  if (n < 1) return "params: n must be >= 1";
  if (M1 < 1) return "params: M1 must be >= 1";
  if (layers.size() != static_cast<size_t>(K - 1)) return "params: expected K-1 layer size triples";
  for (const auto& l : layers)
    if (l.m1 < 1 || l.m2 < 1 || l.m3 < 1) return "params: all sizes must be >= 1";
  if (layers[0].m3 != 1) return "params: layer 2 has no randomization index (M_{2,3} must be 1)";
  return std::nullopt;
}

std::uint64_t Codebook::flat_index(int depth, const std::vector<int>& w,
                                   const std::vector<int>& l) const {
  std::uint64_t idx = w[0];
  for (int k = 2; k <= depth; ++k) {
    const LayerSizes& s = params.layers[k - 2];
    int lk = s.m3 == 1 ? 0 : l[k - 2];
    idx = idx * s.codewords() + static_cast<std::uint64_t>(w[k - 1]) * s.m3 + lk;
  }
  return idx;
}

void Codebook::split_index(std::uint64_t flat, std::vector<int>& w, std::vector<int>& l) const {
  const int K = params.K;
  w.assign(K, 0);
  l.assign(K - 1, 0);
  for (int k = K; k >= 2; --k) {
    const LayerSizes& s = params.layers[k - 2];
    std::uint64_t local = flat % s.codewords();
    flat /= s.codewords();
    w[k - 1] = static_cast<int>(local / s.m3);
    l[k - 2] = static_cast<int>(local % s.m3);
  }
  w[0] = static_cast<int>(flat);
}

Codebook build_codebook(const CodeParams& params, const AuxChain& aux) {
  if (auto err = params.validate()) throw std::invalid_argument(*err);
  if (aux.layers() != params.K - 1)
    throw std::invalid_argument("build_codebook: aux chain layer count mismatch");

  Codebook book;
  book.params = params;
  book.aux = aux;
  book.layers.resize(params.K);

  std::uint64_t count = params.M1;
  for (int depth = 1; depth <= params.K; ++depth) {
    if (depth >= 2) count *= params.layers[depth - 2].codewords();
    std::mt19937_64 rng = make_stream(params.seed, static_cast<std::uint64_t>(depth));
    auto& layer = book.layers[depth - 1];
    std::uint64_t layer_count = depth == 1 ? params.M1 : count;
    layer.resize(layer_count, std::vector<int>(params.n));
    int per = depth == 1 ? 1 : params.layers[depth - 2].codewords();
    for (std::uint64_t f = 0; f < layer_count; ++f) {
      for (int i = 0; i < params.n; ++i) {
        int parent = depth == 1 ? 0 : book.layers[depth - 2][f / per][i];
        layer[f][i] = sample_row(aux.dists[depth - 1][parent], rng);
      }
    }
  }
  return book;
}

Encoding encode(const Codebook& book, const std::vector<int>& w, std::mt19937_64& rng) {
  const CodeParams& p = book.params;
  if (w.size() != static_cast<size_t>(p.K)) throw std::invalid_argument("encode: need K messages");
  for (int k = 1; k <= p.K; ++k)
    if (w[k - 1] < 0 || w[k - 1] >= p.message_size(k))
      throw std::out_of_range("encode: message index out of range");
  Encoding enc;
  enc.l.assign(p.K - 1, 0);
  for (int k = 3; k <= p.K; ++k) {
    int m3 = p.layers[k - 2].m3;
    if (m3 > 1) enc.l[k - 2] = static_cast<int>(rng() % m3);
  }
  enc.x = book.layers[p.K - 1][book.flat_index(p.K, w, enc.l)];
  return enc;
}

namespace {

// Likelihood of y under receiver matrix P for the top-layer codeword.
double likelihood(const Matrix& P, const std::vector<int>& x, const std::vector<int>& y) {
  double p = 1;
  for (size_t i = 0; i < x.size(); ++i) p *= P[x[i]][y[i]];
  return p;
}

// Message-prefix index (w_1..w_m) of a top-layer flat index.
std::uint64_t prefix_of(const Codebook& book, std::uint64_t flat, int m) {
  std::vector<int> w, l;
  book.split_index(flat, w, l);
  std::uint64_t idx = w[0];
  for (int k = 2; k <= m; ++k) idx = idx * book.params.message_size(k) + w[k - 1];
  return idx;
}

std::uint64_t prefix_count(const CodeParams& p, int m) {
  std::uint64_t c = p.M1;
  for (int k = 2; k <= m; ++k) c *= p.message_size(k);
  return c;
}

std::vector<int> prefix_to_messages(const CodeParams& p, std::uint64_t idx, int m) {
  std::vector<int> w(m);
  for (int k = m; k >= 2; --k) {
    w[k - 1] = static_cast<int>(idx % p.message_size(k));
    idx /= p.message_size(k);
  }
  w[0] = static_cast<int>(idx);
  return w;
}

DecodeResult decode_ml(const Codebook& book, const Matrix& P, int receiver,
                       const std::vector<int>& y) {
  const auto& top = book.layers[book.params.K - 1];
  std::vector<double> score(prefix_count(book.params, receiver), 0.0);
  for (std::uint64_t f = 0; f < top.size(); ++f)
    score[prefix_of(book, f, receiver)] += likelihood(P, top[f], y);
  std::uint64_t best = 0;
  for (std::uint64_t i = 1; i < score.size(); ++i)
    if (score[i] > score[best]) best = i;
  DecodeResult res;
  res.w = prefix_to_messages(book.params, best, receiver);
  return res;
}

DecodeResult decode_typicality(const Codebook& book, const ChannelCascade& cascade, int receiver,
                               const std::vector<int>& y, double epsilon) {
  const CodeParams& p = book.params;
  const int n = p.n;
  // Design distribution over (U_1..U_receiver, Y_receiver).
  std::vector<int> axes;
  for (int j = 1; j <= receiver; ++j) axes.push_back(axis_of_u(j, p.K));
  axes.push_back(axis_of_y(receiver, p.K));
  JointDist design = joint(cascade, book.aux).marginal(axes);

  const auto& chains = book.layers[receiver - 1];
  std::map<std::uint64_t, bool> typical_prefixes;
  // Parent flat index at each shallower depth, via per-layer divisors.
  std::vector<int> per(receiver + 1, 1);
  for (int d = 2; d <= receiver; ++d) per[d] = p.layers[d - 2].codewords();

  for (std::uint64_t f = 0; f < chains.size(); ++f) {
    std::vector<double> counts(design.p.size(), 0.0);
    for (int i = 0; i < n; ++i) {
      std::uint64_t sub = 0;
      std::uint64_t anc = f;
      std::vector<int> symbols(receiver);
      for (int d = receiver; d >= 1; --d) {
        symbols[d - 1] = book.layers[d - 1][anc][i];
        anc /= d >= 2 ? per[d] : 1;
      }
      for (int d = 1; d <= receiver; ++d) sub = sub * design.dims[d - 1] + symbols[d - 1];
      sub = sub * design.dims[receiver] + y[i];
      counts[sub] += 1.0 / n;
    }
    double dev = 0;
    for (size_t s = 0; s < counts.size(); ++s)
      dev = std::max(dev, std::abs(counts[s] - design.p[s]));
    if (dev <= epsilon) {
      // Recover the message prefix from the depth-`receiver` flat index.
      std::uint64_t flat = f, idx;
      std::vector<int> w(receiver);
      for (int k = receiver; k >= 2; --k) {
        std::uint64_t local = flat % p.layers[k - 2].codewords();
        flat /= p.layers[k - 2].codewords();
        w[k - 1] = static_cast<int>(local / p.layers[k - 2].m3);
      }
      w[0] = static_cast<int>(flat);
      idx = w[0];
      for (int k = 2; k <= receiver; ++k) idx = idx * p.message_size(k) + w[k - 1];
      typical_prefixes[idx] = true;
    }
  }
  DecodeResult res;
  if (typical_prefixes.empty()) {
    res.status = DecodeResult::Status::NoneTypical;
  } else if (typical_prefixes.size() > 1) {
    res.status = DecodeResult::Status::Ambiguous;
  } else {
    res.w = prefix_to_messages(p, typical_prefixes.begin()->first, receiver);
  }
  return res;
}

}  // namespace

DecodeResult decode(const Codebook& book, const ChannelCascade& cascade, int receiver,
                    const std::vector<int>& y, const DecoderMode& mode) {
  if (receiver < 1 || receiver > book.params.K)
    throw std::out_of_range("decode: receiver out of range");
  if (y.size() != static_cast<size_t>(book.params.n))
    throw std::invalid_argument("decode: y has wrong length");
  if (std::holds_alternative<MlDecoder>(mode))
    return decode_ml(book, cascade.to_receiver(receiver), receiver, y);
  return decode_typicality(book, cascade, receiver, y,
                           std::get<TypicalityDecoder>(mode).epsilon);
}

double exact_leakage(const Codebook& book, const ChannelCascade& cascade, int receiver,
                     const std::vector<int>& message_set) {
  const CodeParams& p = book.params;
  const int n = p.n;
  const int ysz = cascade.y_size(receiver);
  std::uint64_t y_total = checked_pow(ysz, n, kEnumCap);
  if (y_total > kEnumCap) throw std::runtime_error("exact_leakage: |Y_r|^n exceeds budget");
  const auto& top = book.layers[p.K - 1];
  if (top.size() * y_total > p.budget)
    throw std::runtime_error("exact_leakage: enumeration cost exceeds budget");

  std::uint64_t s_total = 1;
  for (int k : message_set) s_total *= p.message_size(k);
  Matrix P = cascade.to_receiver(receiver);

  // s-index of every top-layer codeword.
  std::vector<std::uint64_t> s_of(top.size());
  for (std::uint64_t f = 0; f < top.size(); ++f) {
    std::vector<int> w, l;
    book.split_index(f, w, l);
    std::uint64_t s = 0;
    for (int k : message_set) s = s * p.message_size(k) + w[k - 1];
    s_of[f] = s;
  }

  std::vector<std::vector<double>> pj(s_total, std::vector<double>(y_total, 0.0));
  std::vector<int> y(n, 0);
  const double wgt = 1.0 / static_cast<double>(top.size());
  for (std::uint64_t yf = 0; yf < y_total; ++yf) {
    for (std::uint64_t f = 0; f < top.size(); ++f)
      pj[s_of[f]][yf] += wgt * likelihood(P, top[f], y);
    for (int i = n - 1; i >= 0; --i) {
      if (++y[i] < ysz) break;
      y[i] = 0;
    }
  }

  std::vector<double> ps(s_total, 0.0), py(y_total, 0.0);
  for (std::uint64_t s = 0; s < s_total; ++s)
    for (std::uint64_t yf = 0; yf < y_total; ++yf) {
      ps[s] += pj[s][yf];
      py[yf] += pj[s][yf];
    }
  double mi = 0;
  for (std::uint64_t s = 0; s < s_total; ++s)
    for (std::uint64_t yf = 0; yf < y_total; ++yf)
      if (pj[s][yf] > 1e-300) mi += pj[s][yf] * std::log2(pj[s][yf] / (ps[s] * py[yf]));
  return std::max(0.0, mi);
}

ErrorEstimate error_probability(const Codebook& book, const ChannelCascade& cascade, int receiver,
                                const ErrorMode& mode) {
  const CodeParams& p = book.params;
  const int n = p.n;
  const int ysz = cascade.y_size(receiver);
  Matrix P = cascade.to_receiver(receiver);
  const auto& top = book.layers[p.K - 1];

  if (std::holds_alternative<ExactError>(mode)) {
    std::uint64_t y_total = checked_pow(ysz, n, kEnumCap);
    if (y_total > kEnumCap) throw std::runtime_error("error_probability: |Y|^n exceeds budget");
    if (top.size() * y_total > p.budget)
      throw std::runtime_error("error_probability: enumeration cost exceeds budget");

    std::vector<std::uint64_t> pref(top.size());
    for (std::uint64_t f = 0; f < top.size(); ++f) pref[f] = prefix_of(book, f, receiver);
    std::uint64_t nprefix = prefix_count(p, receiver);

    double err = 0;
    std::vector<int> y(n, 0);
    std::vector<double> like(top.size());
    std::vector<double> score(nprefix);
    const double wgt = 1.0 / static_cast<double>(top.size());
    for (std::uint64_t yf = 0; yf < y_total; ++yf) {
      std::fill(score.begin(), score.end(), 0.0);
      for (std::uint64_t f = 0; f < top.size(); ++f) {
        like[f] = likelihood(P, top[f], y);
        score[pref[f]] += like[f];
      }
      std::uint64_t best = 0;
      for (std::uint64_t i = 1; i < nprefix; ++i)
        if (score[i] > score[best]) best = i;
      for (std::uint64_t f = 0; f < top.size(); ++f)
        if (pref[f] != best) err += wgt * like[f];
      for (int i = n - 1; i >= 0; --i) {
        if (++y[i] < ysz) break;
        y[i] = 0;
      }
    }
    return {err, err, err};
  }

  const auto& mc = std::get<MonteCarloError>(mode);
  std::mt19937_64 rng = make_stream(mc.seed, 0);
  std::uint64_t errors = 0;
  std::vector<int> y(n);
  for (std::uint64_t t = 0; t < mc.trials; ++t) {
    std::uint64_t f = rng() % top.size();
    for (int i = 0; i < n; ++i) y[i] = sample_row(P[top[f][i]], rng);
    DecodeResult dec = decode_ml(book, P, receiver, y);
    std::uint64_t decoded = dec.w[0];
    for (int k = 2; k <= receiver; ++k) decoded = decoded * p.message_size(k) + dec.w[k - 1];
    if (decoded != prefix_of(book, f, receiver)) ++errors;
  }
  const double z = 1.959963984540054;
  const double t = static_cast<double>(mc.trials);
  const double phat = errors / t;
  const double denom = 1 + z * z / t;
  const double center = (phat + z * z / (2 * t)) / denom;
  const double half = z * std::sqrt(phat * (1 - phat) / t + z * z / (4 * t * t)) / denom;
  return {phat, std::max(0.0, center - half), std::min(1.0, center + half)};
}

std::string SimSpec::to_json() const {
  nlohmann::json j;
  nlohmann::json lj = nlohmann::json::array();
  for (const auto& l : params.layers) lj.push_back({l.m1, l.m2, l.m3});
  j["params"] = {{"K", params.K},     {"n", params.n},       {"M1", params.M1},
                 {"layers", lj},      {"seed", params.seed}, {"budget", params.budget}};
  j["cascade"] = nlohmann::json::parse(cascade.to_json());
  j["aux"] = nlohmann::json::parse(aux.to_json());
  j["message_set"] = message_set;
  j["leakage_receiver"] = leakage_receiver;
  j["decode_receiver"] = decode_receiver;
  j["mc_check"] = mc_check;
  j["mc_trials"] = mc_trials;
  return j.dump();
}

SimSpec SimSpec::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  SimSpec spec;
  const auto& pj = j.at("params");
  spec.params.K = pj.at("K").get<int>();
  spec.params.n = pj.at("n").get<int>();
  spec.params.M1 = pj.at("M1").get<int>();
  for (const auto& l : pj.at("layers"))
    spec.params.layers.push_back({l.at(0).get<int>(), l.at(1).get<int>(), l.at(2).get<int>()});
  if (pj.contains("seed")) spec.params.seed = pj.at("seed").get<std::uint64_t>();
  if (pj.contains("budget")) spec.params.budget = pj.at("budget").get<std::uint64_t>();
  spec.cascade = ChannelCascade::from_json(j.at("cascade").dump());
  spec.aux = AuxChain::from_json(j.at("aux").dump());
  spec.message_set = j.at("message_set").get<std::vector<int>>();
  spec.leakage_receiver = j.at("leakage_receiver").get<int>();
  spec.decode_receiver = j.at("decode_receiver").get<int>();
  if (j.contains("mc_check")) spec.mc_check = j.at("mc_check").get<bool>();
  if (j.contains("mc_trials")) spec.mc_trials = j.at("mc_trials").get<std::uint64_t>();
  return spec;
}

std::string simulate(const SimSpec& spec, std::uint64_t seed) {
  CodeParams params = spec.params;
  params.seed = seed;
  if (auto err = params.validate()) throw std::invalid_argument(*err);
  if (auto err = validate_cascade(spec.cascade)) throw std::invalid_argument(*err);
  if (auto err = validate_aux(spec.aux, spec.cascade)) throw std::invalid_argument(*err);

  Codebook book = build_codebook(params, spec.aux);
  double leak = exact_leakage(book, spec.cascade, spec.leakage_receiver, spec.message_set);
  ErrorEstimate err = error_probability(book, spec.cascade, spec.decode_receiver, ExactError{});

  nlohmann::json j;
  j["leakage_bits"] = leak;
  j["error_prob"] = err.probability;
  if (spec.mc_check) {
    ErrorEstimate mc = error_probability(
        book, spec.cascade, spec.decode_receiver,
        MonteCarloError{spec.mc_trials, splitmix64(seed ^ 0x51a7e5u)});
    j["error_prob_mc"] = {{"estimate", mc.probability}, {"lo", mc.lo}, {"hi", mc.hi}};
  }
  nlohmann::json rates = nlohmann::json::object();
  for (int k = 1; k <= params.K; ++k) rates["R_" + std::to_string(k)] = params.rate(k);
  j["rates"] = rates;
  j["budget_used"] =
      params.total_codewords() *
      checked_pow(spec.cascade.y_size(spec.leakage_receiver), params.n, params.budget);
  j["seed"] = seed;
  return j.dump();
}

}  // namespace secbc
