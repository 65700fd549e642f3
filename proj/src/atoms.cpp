#include "secbc/atoms.hpp"

#include "secbc/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace secbc {

AtomTable::AtomTable(int K, Mode mode) : K_(K), mode_(mode) {
  if (K < 2) throw std::invalid_argument("AtomTable: K must be >= 2");
  if (mode == Mode::Rational)
    rvals_.assign(static_cast<size_t>(K) * K, Rat(0));
  else
    fvals_.assign(static_cast<size_t>(K) * K, 0.0);
}

void AtomTable::check_index(int j, int m) const {
  if (j < 1 || j > K_ || m < 1 || m > K_)
    throw std::out_of_range("AtomTable: index (" + std::to_string(j) + "," + std::to_string(m) +
                            ") out of range for K=" + std::to_string(K_));
}

const Rat& AtomTable::at(int j, int m) const {
  check_index(j, m);
  if (mode_ != Mode::Rational) throw std::logic_error("AtomTable: not in rational mode");
  return rvals_[static_cast<size_t>(j - 1) * K_ + (m - 1)];
}

Rat& AtomTable::at(int j, int m) {
  check_index(j, m);
  if (mode_ != Mode::Rational) throw std::logic_error("AtomTable: not in rational mode");
  return rvals_[static_cast<size_t>(j - 1) * K_ + (m - 1)];
}

double AtomTable::fat(int j, int m) const {
  check_index(j, m);
  if (mode_ != Mode::Float) throw std::logic_error("AtomTable: not in float mode");
  return fvals_[static_cast<size_t>(j - 1) * K_ + (m - 1)];
}

double& AtomTable::fat(int j, int m) {
  check_index(j, m);
  if (mode_ != Mode::Float) throw std::logic_error("AtomTable: not in float mode");
  return fvals_[static_cast<size_t>(j - 1) * K_ + (m - 1)];
}

Rat AtomTable::compound(int l, int k, int m) const {
  if (l < 0 || k > K_ || l > k || m < 1 || m > K_)
    throw std::out_of_range("compound: bad indices");
  Rat sum(0);
  for (int j = l + 1; j <= k; ++j) sum += at(j, m);
  return sum;
}

double AtomTable::fcompound(int l, int k, int m) const {
  if (l < 0 || k > K_ || l > k || m < 1 || m > K_)
    throw std::out_of_range("compound: bad indices");
  double sum = 0;
  for (int j = l + 1; j <= k; ++j) sum += fat(j, m);
  return sum;
}

std::optional<std::string> AtomTable::validate(double tol) const {
  auto idx = [](int j, int m) {
    return "a[" + std::to_string(j) + "," + std::to_string(m) + "]";
  };
  for (int j = 1; j <= K_; ++j) {
    for (int m = 1; m <= K_; ++m) {
      if (mode_ == Mode::Rational) {
        if (at(j, m) < 0) return "negative entry " + idx(j, m);
      } else {
        if (fat(j, m) < -tol) return "negative entry " + idx(j, m);
      }
    }
    for (int m = 1; m < K_; ++m) {
      if (mode_ == Mode::Rational) {
        if (at(j, m) > at(j, m + 1))
          return "monotonicity violated at " + idx(j, m) + " > " + idx(j, m + 1);
      } else {
        if (fat(j, m) > fat(j, m + 1) + tol)
          return "monotonicity violated at " + idx(j, m) + " > " + idx(j, m + 1);
      }
    }
  }
  return std::nullopt;
}

AtomTable AtomTable::to_rational(unsigned bits) const {
  if (mode_ == Mode::Rational) return *this;
  const Rat eps(Int(1), Int(1) << bits);
  AtomTable out(K_, Mode::Rational);
  for (int j = 1; j <= K_; ++j) {
    for (int m = 1; m <= K_; ++m) {
      Rat v = rationalize(fat(j, m), bits);
      if (v < 0) {
        if (v < -eps) throw std::runtime_error("to_rational: negative atom beyond tolerance");
        v = 0;
      }
      if (m > 1 && v < out.at(j, m - 1)) {
        if (out.at(j, m - 1) - v > eps)
          throw std::runtime_error("to_rational: monotonicity margin below 2^-" + std::to_string(bits));
        v = out.at(j, m - 1);
      }
      out.at(j, m) = v;
    }
  }
  return out;
}

std::string AtomTable::to_json() const {
  nlohmann::json j;
  j["K"] = K_;
  j["mode"] = mode_ == Mode::Rational ? "rational" : "float";
  nlohmann::json atoms = nlohmann::json::object();
  for (int jj = 1; jj <= K_; ++jj)
    for (int m = 1; m <= K_; ++m) {
      std::string key = std::to_string(jj) + "," + std::to_string(m);
      if (mode_ == Mode::Rational)
        atoms[key] = to_string(at(jj, m));
      else
        atoms[key] = fat(jj, m);
    }
  j["atoms"] = atoms;
  return j.dump();
}

AtomTable AtomTable::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  int K = j.at("K").get<int>();
  std::string mode = j.at("mode").get<std::string>();
  AtomTable t(K, mode == "rational" ? Mode::Rational : Mode::Float);
  for (auto& [key, val] : j.at("atoms").items()) {
    auto comma = key.find(',');
    int jj = std::stoi(key.substr(0, comma));
    int m = std::stoi(key.substr(comma + 1));
    if (t.mode() == Mode::Rational)
      t.at(jj, m) = parse_rational(val.get<std::string>());
    else
      t.fat(jj, m) = val.get<double>();
  }
  return t;
}

AtomTable random_table(int K, std::uint64_t seed, std::uint64_t denominator_bound) {
  if (K < 2) throw std::invalid_argument("random_table: K must be >= 2");
  if (denominator_bound < 2) throw std::invalid_argument("random_table: denominator bound must be >= 2");
  AtomTable t(K, AtomTable::Mode::Rational);
  auto rng = make_stream(seed, 0);
  std::uniform_int_distribution<std::uint64_t> den_dist(1, denominator_bound);
  for (int j = 1; j <= K; ++j) {
    std::vector<Rat> row(K);
    for (int m = 0; m < K; ++m) {
      std::uint64_t q = den_dist(rng);
      std::uniform_int_distribution<std::uint64_t> num_dist(0, 2 * q);
      row[m] = Rat(Int(num_dist(rng)), Int(q));
    }
    // Sorting the draws makes each row weakly increasing in m.
    std::sort(row.begin(), row.end());
    for (int m = 1; m <= K; ++m) t.at(j, m) = row[m - 1];
  }
  return t;
}

}  // namespace secbc
