#include "secbc/boundary.hpp"
#include "secbc/fme.hpp"
#include "secbc/rng.hpp"
#include "secbc/simulator.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace secbc;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::vector<double> parse_weights(const std::string& s) {
  std::vector<double> w;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) w.push_back(std::stod(tok));
  return w;
}

int fail(const std::string& kind, const json& detail) {
  json j;
  j["ok"] = false;
  j["failure"] = kind;
  j["detail"] = detail;
  std::cout << j.dump() << "\n";
  return 1;
}

Region region_by_kind(const std::string& kind, int K, int step, bool with_nonneg) {
  if (kind == "theorem1") return theorem1(K, with_nonneg);
  if (kind == "pre") return pre_elimination(K, with_nonneg);
  if (kind == "structure") return inductive_structure(step, K, with_nonneg);
  return reference_region(reference_kind_from_string(kind), with_nonneg);
}

int kind_K(const std::string& kind, int k_flag) {
  if (kind == "prop-k3") return 3;
  if (kind == "prop-k4" || kind == "naive-k4") return 4;
  return k_flag;
}

int cmd_verify_projection(int K, int trials, std::uint64_t seed, bool with_nonneg) {
  json reports = json::array();
  bool all = true;
  for (int t = 0; t < trials; ++t) {
    AtomTable table = random_table(K, splitmix64(seed) + t, 64);
    VerifyReport rep = inductive_verify(K, table, with_nonneg);
    all = all && rep.all_passed;
    json r = json::parse(rep.to_json());
    r["trial"] = t;
    reports.push_back(r);
  }
  if (!all) return fail("projection-identity", reports);
  json j;
  j["ok"] = true;
  j["k"] = K;
  j["trials"] = trials;
  j["with_nonneg"] = with_nonneg;
  std::cout << j.dump() << "\n";
  return 0;
}

int cmd_check_containment(const std::string& a, const std::string& b, int trials,
                          std::uint64_t seed, bool with_nonneg, int k_flag) {
  int K = kind_K(a, k_flag);
  if (kind_K(b, k_flag) != K)
    throw std::runtime_error("check-containment: kinds live in different dimensions");
  Region ra = region_by_kind(a, K, 0, with_nonneg);
  Region rb = region_by_kind(b, K, 0, with_nonneg);
  for (int t = 0; t < trials; ++t) {
    AtomTable table = random_table(K, splitmix64(seed) + t, 64);
    CompareResult cmp = contains(InstantiatedSystem::instantiate(ra, table),
                                 InstantiatedSystem::instantiate(rb, table));
    if (!cmp.holds) {
      json w = json::array();
      for (const auto& v : cmp.witness) w.push_back(to_string(v));
      return fail("containment",
                  {{"a", a}, {"b", b}, {"trial", t}, {"witness", w}, {"row", cmp.failing_row}});
    }
  }
  json j;
  j["ok"] = true;
  j["contains"] = {{"outer", a}, {"inner", b}};
  j["trials"] = trials;
  std::cout << j.dump() << "\n";
  return 0;
}

struct ChannelSpec {
  ChannelCascade cascade;
  std::optional<AuxChain> aux;
  std::vector<int> aux_sizes;
};

ChannelSpec load_channel_spec(const std::string& path) {
  json j = json::parse(read_file(path));
  ChannelSpec spec;
  spec.cascade = ChannelCascade::from_json(j.at("cascade").dump());
  if (j.contains("aux")) spec.aux = AuxChain::from_json(j.at("aux").dump());
  if (j.contains("aux_sizes"))
    spec.aux_sizes = j.at("aux_sizes").get<std::vector<int>>();
  else if (spec.aux)
    spec.aux_sizes = spec.aux->sizes;
  else
    spec.aux_sizes.assign(spec.cascade.K - 1, spec.cascade.x_size);
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact verifier for layered-secrecy broadcast rate regions"};
  app.require_subcommand(1);

  int k = 3, step = 3, trials = 10, restarts = 10;
  std::uint64_t seed = 0;
  bool with_nonneg = false;
  std::string kind = "theorem1", kind_a, kind_b, spec_path, out_path;
  std::vector<std::string> weight_args;

  auto* vp = app.add_subcommand("verify-projection",
                                "run the staged elimination and compare against the target region");
  vp->add_option("--k", k, "number of receivers")->required();
  vp->add_option("--trials", trials, "random atom tables")->required();
  vp->add_option("--seed", seed, "root seed")->required();
  vp->add_flag("--with-nonneg", with_nonneg, "append rate nonnegativity on both sides");

  auto* gr = app.add_subcommand("gen-region", "print a region as JSON");
  gr->add_option("--kind", kind, "theorem1|pre|structure|prop-k3|prop-k4|naive-k4")->required();
  gr->add_option("--k", k, "number of receivers");
  gr->add_option("--step", step, "structure step index");
  gr->add_flag("--with-nonneg", with_nonneg, "append rate nonnegativity");
  gr->add_option("--out", out_path, "output path (default stdout)");

  auto* cc = app.add_subcommand("check-containment", "check region A contains region B per table");
  cc->add_option("--a", kind_a, "outer region kind")->required();
  cc->add_option("--b", kind_b, "inner region kind")->required();
  cc->add_option("--trials", trials, "random atom tables")->required();
  cc->add_option("--seed", seed, "root seed")->required();
  cc->add_option("--k", k, "number of receivers (for theorem1/pre)");
  cc->add_flag("--with-nonneg", with_nonneg, "append rate nonnegativity");

  auto* ca = app.add_subcommand("channel-atoms", "mutual-information atoms of a concrete channel");
  ca->add_option("--spec", spec_path, "channel spec JSON (cascade + aux)")->required();
  ca->add_option("--out", out_path, "output path (default stdout)");

  auto* bd = app.add_subcommand("boundary", "trace achievable weighted-sum-rate points");
  bd->add_option("--spec", spec_path, "channel spec JSON (cascade [+ aux_sizes])")->required();
  bd->add_option("--weights", weight_args, "comma-separated weight vector (repeatable)")
      ->required();
  bd->add_option("--restarts", restarts, "random restarts per weight vector");
  bd->add_option("--seed", seed, "root seed")->required();
  bd->add_option("--out", out_path, "CSV output path")->required();

  auto* sm = app.add_subcommand("simulate", "run one codebook experiment");
  sm->add_option("--spec", spec_path, "simulation spec JSON")->required();
  sm->add_option("--seed", seed, "codebook seed")->required();
  sm->add_option("--out", out_path, "report output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (vp->parsed()) return cmd_verify_projection(k, trials, seed, with_nonneg);
    if (gr->parsed()) {
      write_output(out_path, region_by_kind(kind, k, step, with_nonneg).to_json());
      return 0;
    }
    if (cc->parsed()) return cmd_check_containment(kind_a, kind_b, trials, seed, with_nonneg, k);
    if (ca->parsed()) {
      ChannelSpec spec = load_channel_spec(spec_path);
      if (!spec.aux) throw std::runtime_error("channel-atoms: spec needs an aux chain");
      write_output(out_path, atoms_from_channel(spec.cascade, *spec.aux).to_json());
      return 0;
    }
    if (bd->parsed()) {
      ChannelSpec spec = load_channel_spec(spec_path);
      BoundaryQuery q;
      q.cascade = spec.cascade;
      q.aux_sizes = spec.aux_sizes;
      q.opt.restarts = restarts;
      q.opt.seed = seed;
      std::vector<std::vector<double>> weight_list;
      for (const auto& w : weight_args) weight_list.push_back(parse_weights(w));
      q.weights = weight_list.front();
      write_output(out_path, sweep_csv(q, weight_list));
      return 0;
    }
    if (sm->parsed()) {
      SimSpec spec = SimSpec::from_json(read_file(spec_path));
      write_output(out_path, simulate(spec, seed));
      return 0;
    }
  } catch (const std::exception& e) {
    json j;
    j["ok"] = false;
    j["error"] = e.what();
    std::cout << j.dump() << "\n";
    return 2;
  }
  return 0;
}
