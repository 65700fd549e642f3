#pragma once

#include "secbc/channel.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace secbc {

// Sizes for the nested binning code at blocklength n. Layer 1 carries W_1
// directly; every layer k >= 2 has M_{k,1} bins, M_{k,2} sub-bins and
// M_{k,3} randomization indices per (bin, sub-bin), with M_{2,3} == 1.
// The message of layer k >= 2 is the pair (bin, sub-bin), of size
// M_{k,1} * M_{k,2}. Rates are log2(size)/n.
struct LayerSizes {
  int m1 = 1;  // bins
  int m2 = 1;  // sub-bins
  int m3 = 1;  // randomization indices
  int codewords() const { return m1 * m2 * m3; }
  int messages() const { return m1 * m2; }
};

struct CodeParams {
  int K = 3;
  int n = 8;
  int M1 = 1;                     // layer-1 message count
  std::vector<LayerSizes> layers;  // layers[k-2] for k = 2..K
  std::uint64_t seed = 0;
  std::uint64_t budget = std::uint64_t{1} << 26;  // cap on |W||L| * |Y|^n

  int message_size(int k) const;          // |W_k|
  int randomization_size(int k) const;    // |L_k| (1 for k <= 2)
  std::uint64_t total_codewords() const;  // top-layer count |W||L|
  double rate(int k) const;               // log2 |W_k| / n
  std::optional<std::string> validate() const;
};

// Nested superposition codebook: layer j holds one length-n codeword per
// index chain, drawn i.i.d. from the aux conditional given the parent.
struct Codebook {
  CodeParams params;
  AuxChain aux;
  // layers[j-1][flat][i]: symbol i of codeword `flat` at depth j
  // (depth K is the X layer). Flat index: chain index in mixed radix,
  // local digit of layer k is w_k * M_{k,3} + l_k.
  std::vector<std::vector<std::vector<int>>> layers;

  // Flat index at depth `depth` for messages w (w[0]=w_1, ..) and
  // randomization picks l (l[k-2] for k>=2; l entries ignored where
  // |L_k| == 1).
  std::uint64_t flat_index(int depth, const std::vector<int>& w, const std::vector<int>& l) const;
  // Inverse: splits a top-layer flat index into (w, l).
  void split_index(std::uint64_t flat, std::vector<int>& w, std::vector<int>& l) const;
};

Codebook build_codebook(const CodeParams& params, const AuxChain& aux);

// Stochastic encoder: uniform randomization indices, then the top-layer
// codeword. Returns the chosen l's alongside x^n.
struct Encoding {
  std::vector<int> x;
  std::vector<int> l;
};
Encoding encode(const Codebook& book, const std::vector<int>& w, std::mt19937_64& rng);

struct MlDecoder {};
struct TypicalityDecoder {
  double epsilon = 0.05;
};
using DecoderMode = std::variant<MlDecoder, TypicalityDecoder>;

// Receiver m decodes W_1..W_m. ML marginalizes the layers above m and the
// randomization indices; ties break toward the smallest message chain.
// Typicality accepts a unique tuple whose empirical (U_1..U_m, Y_m) type
// is within epsilon of the design distribution in sup norm.
struct DecodeResult {
  enum class Status { Ok, NoneTypical, Ambiguous };
  Status status = Status::Ok;
  std::vector<int> w;  // w[0..m-1] when Ok
};
DecodeResult decode(const Codebook& book, const ChannelCascade& cascade, int receiver,
                    const std::vector<int>& y, const DecoderMode& mode);

// I(W_S; Y_r^n) in bits for this fixed codebook, by exact enumeration of
// all top-layer codewords and all y^n (budget: |Y_r|^n <= 2^20).
double exact_leakage(const Codebook& book, const ChannelCascade& cascade, int receiver,
                     const std::vector<int>& message_set);

struct ExactError {};
struct MonteCarloError {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
};
using ErrorMode = std::variant<ExactError, MonteCarloError>;

struct ErrorEstimate {
  double probability = 0.0;
  // Wilson 95% interval (Monte-Carlo mode only; exact mode collapses it).
  double lo = 0.0;
  double hi = 0.0;
};

// Average ML error probability at `receiver` over uniform messages and
// randomization, exact (enumerating (w,l,y^n)) or Monte-Carlo.
ErrorEstimate error_probability(const Codebook& book, const ChannelCascade& cascade, int receiver,
                                const ErrorMode& mode);

// One scripted run: build the codebook, evaluate leakage at the
// eavesdropper and ML error at the legitimate receiver, report JSON.
struct SimSpec {
  CodeParams params;
  ChannelCascade cascade;
  AuxChain aux;
  std::vector<int> message_set;  // layers whose joint leakage is measured
  int leakage_receiver = 1;
  int decode_receiver = 3;
  bool mc_check = false;  // also run Monte-Carlo error estimation
  std::uint64_t mc_trials = 100000;

  std::string to_json() const;
  static SimSpec from_json(const std::string& text);
};

std::string simulate(const SimSpec& spec, std::uint64_t seed);

}  // namespace secbc
