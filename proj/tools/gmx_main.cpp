#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "gmx/json_io.hpp"

using namespace gmx;

namespace {

constexpr std::uint32_t kDefaultSeed = 0xB10B;

int exit_code = 0;  // 0 ok, 1 property FAIL, 2 input error

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string fnv_digest(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

void flatten(const Json& j, const std::string& prefix, std::ostream& os) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items())
      flatten(v, prefix.empty() ? k : prefix + "." + k, os);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i)
      flatten(j[i], prefix + "[" + std::to_string(i) + "]", os);
  } else {
    os << prefix << "," << j.dump() << "\n";
  }
}

struct Emitter {
  std::string out_path;
  std::string format = "json";

  void emit(const Json& report) const {
    std::ostringstream os;
    if (format == "csv")
      flatten(report, "", os);
    else
      os << report.dump(2) << "\n";
    if (out_path.empty()) {
      std::cout << os.str();
    } else {
      std::ofstream out(out_path);
      if (!out) throw std::runtime_error("cannot write " + out_path);
      out << os.str();
    }
  }
};

Json make_report(const std::string& command, const std::string& digest,
                 std::uint32_t seed, Json outputs) {
  return Json{{"command", command},
              {"inputs_digest", digest},
              {"seed", seed},
              {"outputs", std::move(outputs)}};
}

// edge paths of length <= k from `from` to the top state
void accepting_paths(const GraphingRep& g, const State& from, int k,
                     std::vector<std::size_t>& cur,
                     std::vector<std::vector<std::size_t>>& out) {
  if (g.top && from == *g.top) {
    out.push_back(cur);
    return;
  }
  if (k == 0) return;
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    if (g.edges[i].src_state == from) {
      cur.push_back(i);
      accepting_paths(g, g.edges[i].dst_state, k - 1, cur, out);
      cur.pop_back();
    }
}

int run_compile(const std::string& in, const std::string& kind, int n,
                int order, const Emitter& emit) {
  std::string text = read_file(in);
  GraphingRep g;
  if (kind == "sram")
    g = compile_sram(parse_sram(text));
  else if (kind == "pram")
    g = compile_pram(parse_pram(text));
  else if (kind == "adt")
    g = interpret_adt(parse_adt(text, n, order));
  else if (kind == "act")
    g = interpret_act(parse_act(text, n));
  else
    throw std::runtime_error("unknown kind: " + kind);

  Json report = make_report(
      "compile", fnv_digest(text), kDefaultSeed,
      Json{{"graphing", graphing_to_json(g)},
           {"states", g.states.size()},
           {"edges", g.edges.size()},
           {"deterministic", is_deterministic(g)},
           {"treeing", is_treeing(g)}});
  emit.emit(report);
  return 0;
}

int run_analyze(const std::string& in, int k, std::uint32_t seed, long box,
                const Emitter& emit) {
  std::string text = read_file(in);
  GraphingRep g = graphing_from_json(Json::parse(text));
  if (!is_deterministic(g))
    throw std::runtime_error("analyze needs a deterministic graphing");
  OracleConfig cfg;
  cfg.seed = seed;
  cfg.box = box;

  Json hk_table = Json::array();
  for (int i = 1; i <= std::max(k, 1); ++i) {
    Int c = admissible_count(g, i);
    hk_table.push_back(Json{{"k", i},
                            {"count", c.get_str()},
                            {"Hk", state_cover_Hk(g, i)}});
  }
  H0Estimate h0 = h0_estimate(g, std::max(k, 2));
  Json outputs{{"Hk", hk_table},
               {"h0",
                Json{{"value", h0.value},
                     {"k", h0.k},
                     {"count", h0.count.get_str()}}},
               {"cells", cell_decomposition(g, k, cfg).size()}};
  if (g.top) {
    CoTree t = entropic_cotree(g, k, *g.top, cfg);
    Json depths = Json::array();
    for (int d = 0; d <= k; ++d)
      depths.push_back(t.depth_count(static_cast<std::size_t>(d)));
    outputs["cotree_depth_counts"] = depths;
    if (emit.format == "dot") {
      Emitter plain{emit.out_path, "json"};
      std::ostringstream os;
      os << cotree_to_dot(t);
      if (emit.out_path.empty())
        std::cout << os.str();
      else
        std::ofstream(emit.out_path) << os.str();
      return 0;
    }
  }
  emit.emit(make_report("analyze", fnv_digest(text), seed, outputs));
  return 0;
}

int run_bounds(const std::string& in, int k, int n, const Emitter& emit) {
  std::string text = read_file(in);
  GraphingRep g = graphing_from_json(Json::parse(text));
  if (!g.amc || g.amc->space.blocks.empty())
    throw std::runtime_error("graphing carries no amc");
  int D = std::max(1, algebraic_degree(g));
  // treeings have entropy zero; otherwise use the k-bounded estimate
  Int h0_count = is_treeing(g) ? Int(1) : h0_estimate(g, std::max(k, 2)).count;
  Int bound = graphing_benor_bound(h0_count, std::max(k, 1), D, n);

  Json outputs{{"D", D},
               {"h0_count", h0_count.get_str()},
               {"bound", bound.get_str()},
               {"k", k},
               {"n", n}};
  if (n == 1 && g.top) {
    std::vector<std::vector<std::size_t>> paths;
    std::vector<std::size_t> cur;
    accepting_paths(g, g.states.front(), k, cur, paths);
    Int oracle(0);
    Json per_path = Json::array();
    for (const auto& path : paths) {
      PolySystem sys = extract_polysystem(g, path, {{0, 1}});
      int c = count_components_1d(sys);
      oracle += c;
      per_path.push_back(Json{{"edges", path}, {"components", c}});
    }
    bool pass = oracle <= bound;
    outputs["oracle_components"] = oracle.get_str();
    outputs["paths"] = per_path;
    outputs["pass"] = pass;
    if (!pass) exit_code = 1;
  }
  emit.emit(make_report("bounds", fnv_digest(text), kDefaultSeed, outputs));
  return exit_code;
}

int run_fan_profile(const std::string& in, const Emitter& emit) {
  std::string text = read_file(in);
  ParamNetwork net = network_from_json(Json::parse(text));
  RhoFan fan = make_fan(parametric_profile(net));
  emit.emit(make_report("fan profile", fnv_digest(text), kDefaultSeed,
                        Json{{"fan", fan_to_json(fan)},
                             {"rho", fan.rho},
                             {"beta", fan.beta},
                             {"convex", fan.convex},
                             {"concave", fan.concave}}));
  return 0;
}

std::vector<Surface> load_surfaces(const std::string& path) {
  std::vector<Surface> out;
  for (const auto& s : Json::parse(read_file(path)))
    out.push_back(surface_from_json(s));
  return out;
}

int run_fan_separate(const std::string& in, const std::string& surfaces,
                     const std::string& mu, const std::string& muxy,
                     long budget, const Emitter& emit) {
  std::string text = read_file(in);
  RhoFan fan = fan_from_json(Json::parse(text));
  std::vector<Surface> S = load_surfaces(surfaces);
  CompactK K{parse_rat(mu), parse_rat(muxy)};
  SepResult r = separates(S, fan, K, budget);
  Json outputs{{"separated", r.separated}};
  if (r.witness) {
    auto jpt = [](const Vec3& p) {
      return Json::array({rat_to_string(p.x), rat_to_string(p.y),
                          rat_to_string(p.z)});
    };
    outputs["witness"] = Json::array({jpt(r.witness->first),
                                      jpt(r.witness->second)});
  }
  if (!r.separated) exit_code = 1;
  emit.emit(make_report("fan separate",
                        fnv_digest(text + read_file(surfaces)), kDefaultSeed,
                        outputs));
  return exit_code;
}

int run_fan_sample(const std::string& in, int dS, const Emitter& emit) {
  std::string text = read_file(in);
  RhoFan fan = fan_from_json(Json::parse(text));
  auto pts = sample_points(fan, dS);
  Json arr = Json::array();
  for (const auto& p : pts)
    arr.push_back(Json::array(
        {rat_to_string(p.x), rat_to_string(p.y), rat_to_string(p.z)}));
  emit.emit(make_report("fan sample", fnv_digest(text), kDefaultSeed,
                        Json{{"points", arr}, {"count", pts.size()}}));
  return 0;
}

int run_fan_volatility(const std::string& in, const std::string& lo,
                       const std::string& hi, const Emitter& emit) {
  std::string text = read_file(in);
  UniPoly c = unipoly_from_json(Json::parse(text));
  int v = volatility(c, parse_rat(lo), parse_rat(hi));
  emit.emit(make_report("fan volatility", fnv_digest(text), kDefaultSeed,
                        Json{{"volatility", v}}));
  return 0;
}

int run_fan_collins(const std::string& surfaces, const std::string& mu,
                    const std::string& muxy, const Emitter& emit) {
  std::string text = read_file(surfaces);
  std::vector<Surface> S = load_surfaces(surfaces);
  CompactK K{parse_rat(mu), parse_rat(muxy)};
  Json arr = Json::array();
  for (const auto& sys : collins_systems(S, K))
    arr.push_back(polysystem_to_json(sys));
  emit.emit(make_report("fan collins", fnv_digest(text), kDefaultSeed,
                        Json{{"systems", arr}, {"count", arr.size()}}));
  return 0;
}

int run_fan_certify(int p, int k, const std::string& in,
                    const Emitter& emit) {
  PolySystem measured;
  const PolySystem* mp = nullptr;
  std::string text;
  if (!in.empty()) {
    text = read_file(in);
    measured = polysystem_from_json(Json::parse(text));
    mp = &measured;
  }
  CertificateQuantities q = certificate_quantities(p, k, mp);
  Json outputs{{"equations", q.equations.get_str()},
               {"degree", q.degree.get_str()},
               {"rho_threshold", q.rho_threshold.get_str()}};
  if (q.measured_equations) {
    outputs["measured_equations"] = q.measured_equations->get_str();
    outputs["measured_degree"] = q.measured_degree->get_str();
    outputs["ok"] = q.ok;
    if (!q.ok) exit_code = 1;
  }
  emit.emit(make_report("fan certify", fnv_digest(text), kDefaultSeed,
                        outputs));
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graphings, machine compilation, entropy and fan geometry"};
  app.require_subcommand(1);

  if (const char* threads = std::getenv("GMX_THREADS")) (void)threads;

  std::string in, out, format = "json";
  std::uint32_t seed = kDefaultSeed;
  int k = 4, n = 1, order = 2, dS = 1, p = 1;
  long budget = 2000000, box = 10;
  int resolution = 50;
  std::string kind = "sram", surfaces, mu = "1", muxy = "1", lo = "-1",
              hi = "1";

  auto add_io = [&](CLI::App* cmd, bool need_in = true) {
    auto* opt = cmd->add_option("--in", in, "input file");
    if (need_in) opt->required();
    cmd->add_option("--out", out, "output file (default stdout)");
    cmd->add_option("--format", format, "json|csv|dot");
  };

  auto* ccompile = app.add_subcommand("compile", "compile a program");
  add_io(ccompile);
  ccompile->add_option("--kind", kind, "sram|pram|adt|act");
  ccompile->add_option("--n", n, "input arity (adt/act)");
  ccompile->add_option("--order", order, "degree bound (adt)");

  auto* canalyze = app.add_subcommand("analyze", "entropy analysis");
  add_io(canalyze);
  canalyze->add_option("--k", k, "sequence length");
  canalyze->add_option("--seed", seed, "oracle seed");
  canalyze->add_option("--box", box, "sampling box half-width");

  auto* cbounds = app.add_subcommand("bounds", "component bounds");
  add_io(cbounds);
  cbounds->add_option("--k", k, "path length");
  cbounds->add_option("--n", n, "input arity");

  auto* cfan = app.add_subcommand("fan", "fan geometry");
  cfan->require_subcommand(1);
  auto* fprofile = cfan->add_subcommand("profile", "parametric profile");
  add_io(fprofile);
  auto* fseparate = cfan->add_subcommand("separate", "surface separation");
  add_io(fseparate);
  fseparate->add_option("--surfaces", surfaces, "surface list")->required();
  fseparate->add_option("--mu", mu, "K slab parameter");
  fseparate->add_option("--muxy", muxy, "K rectangle bound");
  fseparate->add_option("--budget", budget, "enumeration budget");
  auto* fsample = cfan->add_subcommand("sample", "segment sample points");
  add_io(fsample);
  fsample->add_option("--ds", dS, "cell count d(S)");
  auto* fvol = cfan->add_subcommand("volatility", "boundary volatility");
  add_io(fvol);
  fvol->add_option("--lo", lo, "domain lower end");
  fvol->add_option("--hi", hi, "domain upper end");
  auto* fcollins = cfan->add_subcommand("collins", "Collins systems");
  fcollins->add_option("--in", surfaces, "surface list")->required();
  fcollins->add_option("--out", out, "output file (default stdout)");
  fcollins->add_option("--format", format, "json|csv");
  fcollins->add_option("--mu", mu, "K slab parameter");
  fcollins->add_option("--muxy", muxy, "K rectangle bound");
  auto* fcertify = cfan->add_subcommand("certify", "certificate quantities");
  fcertify->add_option("--in", in, "measured polynomial system");
  fcertify->add_option("--out", out, "output file (default stdout)");
  fcertify->add_option("--format", format, "json|csv");
  fcertify->add_option("--p", p, "processor count");
  fcertify->add_option("--k", k, "step count");
  (void)resolution;

  CLI11_PARSE(app, argc, argv);

  Emitter emit{out, format};
  try {
    if (*ccompile) return run_compile(in, kind, n, order, emit);
    if (*canalyze) return run_analyze(in, k, seed, box, emit);
    if (*cbounds) return run_bounds(in, k, n, emit);
    if (*fprofile) return run_fan_profile(in, emit);
    if (*fseparate)
      return run_fan_separate(in, surfaces, mu, muxy, budget, emit);
    if (*fsample) return run_fan_sample(in, dS, emit);
    if (*fvol) return run_fan_volatility(in, lo, hi, emit);
    if (*fcollins) return run_fan_collins(surfaces, mu, muxy, emit);
    if (*fcertify) return run_fan_certify(p, k, in, emit);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
