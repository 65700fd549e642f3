#include "secbc/region.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <stdexcept>

namespace secbc {

std::string RateSymbol::name() const {
  if (is_total()) return "R" + std::to_string(k);
  return "R" + std::to_string(k) + std::to_string(part);
}

Rat RhsExpr::eval(const AtomTable& table) const {
  Rat v = constant;
  for (const auto& [jm, c] : coeffs) v += c * table.at(jm.first, jm.second);
  return v;
}

RhsExpr& RhsExpr::operator+=(const RhsExpr& o) {
  for (const auto& [jm, c] : o.coeffs) coeffs[jm] += c;
  constant += o.constant;
  prune_zeros();
  return *this;
}

RhsExpr& RhsExpr::operator*=(const Rat& s) {
  for (auto& [jm, c] : coeffs) c *= s;
  constant *= s;
  prune_zeros();
  return *this;
}

void RhsExpr::prune_zeros() {
  for (auto it = coeffs.begin(); it != coeffs.end();)
    it = it->second == 0 ? coeffs.erase(it) : std::next(it);
}

void Inequality::normalize() {
  for (auto it = lhs.begin(); it != lhs.end();)
    it = it->second == 0 ? lhs.erase(it) : std::next(it);
  rhs.prune_zeros();

  Int den(1);
  auto lcm_den = [&den](const Rat& r) { den = lcm(den, denominator(r)); };
  for (const auto& [s, c] : lhs) lcm_den(c);
  for (const auto& [jm, c] : rhs.coeffs) lcm_den(c);
  lcm_den(rhs.constant);

  Int g(0);
  auto gcd_num = [&](const Rat& r) { g = gcd(g, Int(numerator(r) * (den / denominator(r)))); };
  for (const auto& [s, c] : lhs) gcd_num(c);
  for (const auto& [jm, c] : rhs.coeffs) gcd_num(c);
  gcd_num(rhs.constant);
  if (g == 0) return;  // 0 <= 0 row

  Rat scale(den, g);
  for (auto& [s, c] : lhs) c *= scale;
  rhs *= scale;
}

std::string Inequality::key() const {
  std::string out;
  for (const auto& [s, c] : lhs) out += s.name() + ":" + to_string(c) + ";";
  out += "<=";
  for (const auto& [jm, c] : rhs.coeffs)
    out += "a" + std::to_string(jm.first) + "," + std::to_string(jm.second) + ":" + to_string(c) + ";";
  out += "c:" + to_string(rhs.constant);
  return out;
}

void Region::add(Inequality ineq) {
  ineq.normalize();
  std::string k = ineq.key();
  for (const auto& existing : inequalities)
    if (existing.key() == k) return;
  inequalities.push_back(std::move(ineq));
}

void Region::add_equality(std::map<RateSymbol, Rat> lhs, RhsExpr rhs) {
  Inequality fwd{lhs, rhs};
  add(fwd);
  for (auto& [s, c] : lhs) c = -c;
  rhs *= Rat(-1);
  add(Inequality{std::move(lhs), std::move(rhs)});
}

void Region::add_nonnegativity() {
  for (const auto& v : variables) add(Inequality{{{v, Rat(-1)}}, RhsExpr{}});
}

bool Region::has_variable(const RateSymbol& v) const {
  return std::find(variables.begin(), variables.end(), v) != variables.end();
}

std::string Region::to_json() const {
  nlohmann::json j;
  j["label"] = label;
  nlohmann::json vars = nlohmann::json::array();
  for (const auto& v : variables) vars.push_back(v.name());
  j["variables"] = vars;
  nlohmann::json ineqs = nlohmann::json::array();
  for (const auto& iq : inequalities) {
    nlohmann::json row;
    nlohmann::json lhs = nlohmann::json::object();
    for (const auto& [s, c] : iq.lhs) lhs[s.name()] = to_string(c);
    nlohmann::json atoms = nlohmann::json::object();
    for (const auto& [jm, c] : iq.rhs.coeffs)
      atoms[std::to_string(jm.first) + "," + std::to_string(jm.second)] = to_string(c);
    row["lhs"] = lhs;
    row["rhs"] = {{"atoms", atoms}, {"const", to_string(iq.rhs.constant)}};
    ineqs.push_back(row);
  }
  j["inequalities"] = ineqs;
  return j.dump();
}

namespace {

RhsExpr atom(int j, int m, Rat c = Rat(1)) {
  RhsExpr e;
  e.coeffs[{j, m}] = std::move(c);
  return e;
}

// sum_{i=lo}^{hi} a[i,i] - sum_{i=lo}^{hi} a[i,m0]; the second sum is
// I(U_hi; Y_m0 | U_{lo-1}) in compound form. m0 < 0 omits it.
RhsExpr diag_minus_column(int lo, int hi, int m0) {
  RhsExpr e;
  for (int i = lo; i <= hi; ++i) {
    e.coeffs[{i, i}] += 1;
    if (m0 >= 1) e.coeffs[{i, m0}] -= 1;
  }
  e.prune_zeros();
  return e;
}

std::map<RateSymbol, Rat> rate_sum(int lo, int hi) {
  std::map<RateSymbol, Rat> lhs;
  for (int i = lo; i <= hi; ++i) lhs[RateSymbol::total(i)] = 1;
  return lhs;
}

}  // namespace

Region theorem1(int K, bool with_nonneg) {
  if (K < 2) throw std::invalid_argument("theorem1: K must be >= 2");
  Region r;
  r.label = "theorem1(K=" + std::to_string(K) + ")";
  for (int k = 1; k <= K; ++k) r.variables.push_back(RateSymbol::total(k));

  r.add(Inequality{rate_sum(1, 1), atom(1, 1)});
  for (int k = 2; k <= K; ++k)
    r.add(Inequality{rate_sum(2, k), diag_minus_column(2, k, -1)});
  for (int l = 3; l <= K; ++l)
    for (int k = l; k <= K; ++k)
      r.add(Inequality{rate_sum(l, k), diag_minus_column(l - 1, k, l - 2)});
  if (with_nonneg) r.add_nonnegativity();
  return r;
}

Region pre_elimination(int K, bool with_nonneg) {
  if (K < 3) throw std::invalid_argument("pre_elimination: K must be >= 3");
  Region r;
  r.label = "pre_elimination(K=" + std::to_string(K) + ")";
  for (int k = 1; k <= K; ++k) r.variables.push_back(RateSymbol::total(k));
  r.variables.push_back(RateSymbol::split(2, 2));
  for (int k = 3; k <= K; ++k) {
    r.variables.push_back(RateSymbol::split(k, 1));
    r.variables.push_back(RateSymbol::split(k, 2));
  }

  r.add(Inequality{rate_sum(1, 1), atom(1, 1)});
  r.add(Inequality{{{RateSymbol::total(2), Rat(1)}, {RateSymbol::split(2, 2), Rat(1)}}, atom(2, 2)});
  for (int k = 3; k <= K; ++k)
    r.add(Inequality{{{RateSymbol::split(k, 1), Rat(1)}, {RateSymbol::split(k, 2), Rat(1)}},
                     atom(k, k)});
  // Secrecy bounds still carrying the trailing sub-bin rate R_{j,2}.
  for (int l = 3; l <= K; ++l)
    for (int j = l - 1; j <= K - 1; ++j) {
      auto lhs = rate_sum(l, j);  // empty when j = l-1
      lhs[RateSymbol::split(j, 2)] += 1;
      r.add(Inequality{std::move(lhs), diag_minus_column(l - 1, j, l - 2)});
    }
  for (int l = 3; l <= K; ++l)
    r.add(Inequality{rate_sum(l, K), diag_minus_column(l - 1, K, l - 2)});
  // Rate-sharing definitions.
  for (int k = 3; k <= K - 1; ++k)
    r.add_equality({{RateSymbol::total(k), Rat(1)},
                    {RateSymbol::split(k - 1, 2), Rat(-1)},
                    {RateSymbol::split(k, 1), Rat(-1)}},
                   RhsExpr{});
  {
    std::map<RateSymbol, Rat> lhs{{RateSymbol::total(K), Rat(1)},
                                  {RateSymbol::split(K - 1, 2), Rat(-1)},
                                  {RateSymbol::split(K, 1), Rat(-1)},
                                  {RateSymbol::split(K, 2), Rat(-1)}};
    r.add_equality(std::move(lhs), RhsExpr{});
  }
  if (with_nonneg) r.add_nonnegativity();
  return r;
}

Region inductive_structure(int k, int K, bool with_nonneg) {
  if (k < 3 || k > K) throw std::invalid_argument("inductive_structure: need 3 <= k <= K");
  Region r;
  r.label = "structure(k=" + std::to_string(k) + ",K=" + std::to_string(K) + ")";
  for (int i = 1; i <= k; ++i) r.variables.push_back(RateSymbol::total(i));
  const RateSymbol tail = RateSymbol::split(k, 2);
  r.variables.push_back(tail);

  r.add(Inequality{rate_sum(1, 1), atom(1, 1)});
  for (int j = 2; j <= k - 1; ++j)
    r.add(Inequality{rate_sum(2, j), diag_minus_column(2, j, -1)});
  {
    auto lhs = rate_sum(2, k);
    lhs[tail] = 1;
    r.add(Inequality{std::move(lhs), diag_minus_column(2, k, -1)});
  }
  for (int l = 3; l <= k - 1; ++l)
    for (int j = l; j <= k - 1; ++j)
      r.add(Inequality{rate_sum(l, j), diag_minus_column(l - 1, j, l - 2)});
  for (int l = 3; l <= k + 1; ++l) {
    auto lhs = rate_sum(l, k);  // empty when l = k+1
    lhs[tail] += 1;
    r.add(Inequality{std::move(lhs), diag_minus_column(l - 1, k, l - 2)});
  }
  if (with_nonneg) r.add_nonnegativity();
  return r;
}

ReferenceKind reference_kind_from_string(const std::string& s) {
  if (s == "prop-k3") return ReferenceKind::PropK3;
  if (s == "prop-k4") return ReferenceKind::PropK4;
  if (s == "naive-k4") return ReferenceKind::NaiveK4;
  throw std::invalid_argument("unknown reference region kind: " + s);
}

Region reference_region(ReferenceKind kind, bool with_nonneg) {
  Region r;
  auto row = [&r](std::map<RateSymbol, Rat> lhs, RhsExpr rhs) {
    r.add(Inequality{std::move(lhs), std::move(rhs)});
  };
  auto R = [](int k) { return RateSymbol::total(k); };

  switch (kind) {
    case ReferenceKind::PropK3: {
      r.label = "prop-k3";
      for (int k = 1; k <= 3; ++k) r.variables.push_back(R(k));
      row({{R(1), Rat(1)}}, atom(1, 1));
      row({{R(2), Rat(1)}}, atom(2, 2));
      // R3 <= min{0, I(U2;Y2|U1) - I(X;Y1|U1)} + I(X;Y3|U2), expanded.
      row({{R(3), Rat(1)}}, atom(3, 3));
      {
        RhsExpr e = atom(3, 3);
        e += atom(2, 2);
        e += atom(2, 1, Rat(-1));
        e += atom(3, 1, Rat(-1));
        row({{R(3), Rat(1)}}, std::move(e));
      }
      break;
    }
    case ReferenceKind::PropK4:
    case ReferenceKind::NaiveK4: {
      r.label = kind == ReferenceKind::PropK4 ? "prop-k4" : "naive-k4";
      for (int k = 1; k <= 4; ++k) r.variables.push_back(R(k));
      row({{R(1), Rat(1)}}, atom(1, 1));
      row({{R(2), Rat(1)}}, atom(2, 2));
      row({{R(3), Rat(1)}}, atom(3, 3));
      {
        // R3 <= I(U3;Y3|U2) + I(U2;Y2|U1) - I(U3;Y1|U1)
        RhsExpr e = atom(3, 3);
        e += atom(2, 2);
        e += atom(2, 1, Rat(-1));
        e += atom(3, 1, Rat(-1));
        row({{R(3), Rat(1)}}, std::move(e));
      }
      {
        // R4 <= I(X;Y4|U3) + I(U3;Y3|U2) - I(X;Y2|U2)
        RhsExpr e = atom(4, 4);
        e += atom(3, 3);
        e += atom(3, 2, Rat(-1));
        e += atom(4, 2, Rat(-1));
        row({{R(4), Rat(1)}}, std::move(e));
      }
      if (kind == ReferenceKind::NaiveK4) {
        row({{R(4), Rat(1)}}, atom(4, 4));
      } else {
        RhsExpr e = atom(3, 3);
        e += atom(4, 4);
        row({{R(3), Rat(1)}, {R(4), Rat(1)}}, std::move(e));
      }
      {
        // R3 + R4 <= I(U3;Y3|U2) + I(X;Y4|U3) + I(U2;Y2|U1) - I(X;Y1|U1)
        RhsExpr e = atom(3, 3);
        e += atom(4, 4);
        e += atom(2, 2);
        e += atom(2, 1, Rat(-1));
        e += atom(3, 1, Rat(-1));
        e += atom(4, 1, Rat(-1));
        row({{R(3), Rat(1)}, {R(4), Rat(1)}}, std::move(e));
      }
      break;
    }
  }
  if (with_nonneg) r.add_nonnegativity();
  return r;
}

}  // namespace secbc
