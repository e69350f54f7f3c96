#include "gmx/json_io.hpp"

#include <functional>
#include <regex>
#include <sstream>
#include <stdexcept>

namespace gmx {

Json rat_to_json(const Rat& q) { return rat_to_string(q); }

Rat rat_from_json(const Json& j) {
  if (j.is_number_integer()) return Rat(j.get<long>());
  return parse_rat(j.get<std::string>());
}

Json unipoly_to_json(const UniPoly& p) {
  Json coeffs = Json::array();
  for (const auto& c : p.coeffs()) coeffs.push_back(rat_to_json(c));
  return Json{{"coeffs", coeffs}};
}

UniPoly unipoly_from_json(const Json& j) {
  std::vector<Rat> coeffs;
  for (const auto& c : j.at("coeffs")) coeffs.push_back(rat_from_json(c));
  return UniPoly(std::move(coeffs));
}

Json multipoly_to_json(const MultiPoly& p) {
  Json terms = Json::array();
  for (const auto& [mono, coeff] : p.terms())
    terms.push_back(Json{{"exps", mono}, {"coeff", rat_to_json(coeff)}});
  return Json{{"terms", terms}};
}

MultiPoly multipoly_from_json(const Json& j) {
  MultiPoly p;
  for (const auto& t : j.at("terms"))
    p.set_term(t.at("exps").get<MultiPoly::Monomial>(),
               rat_from_json(t.at("coeff")));
  return p;
}

Json coord_to_json(const Coord& c) { return Json::array({c.block, c.index}); }

Coord coord_from_json(const Json& j) {
  return {j.at(0).get<int>(), j.at(1).get<long>()};
}

namespace {

Region region_of_mask(std::uint8_t mask,
                      const std::function<Region(Rel)>& make) {
  if (auto rel = signmask::to_rel(mask)) return make(*rel);
  if (mask == signmask::kAll) return Region::whole();
  // empty mask: conjoin two incompatible sign conditions
  return make(Rel::Lt).intersect(make(Rel::Gt));
}

}  // namespace

Json region_to_json(const Region& r) {
  Json masks = Json::array();
  for (const auto& [c, m] : r.coord_masks())
    masks.push_back(Json{{"coord", coord_to_json(c)}, {"mask", m}});
  Json cmps = Json::array();
  for (const auto& a : r.cmp_atoms())
    cmps.push_back(Json{{"a", coord_to_json(a.a)},
                        {"b", coord_to_json(a.b)},
                        {"equal", a.equal}});
  Json polys = Json::array();
  for (const auto& a : r.poly_atoms()) {
    Json vars = Json::array();
    for (const auto& v : a.vars) vars.push_back(coord_to_json(v));
    polys.push_back(Json{{"vars", vars},
                         {"poly", multipoly_to_json(a.poly)},
                         {"mask", a.mask}});
  }
  return Json{{"masks", masks}, {"cmps", cmps}, {"polys", polys}};
}

Region region_from_json(const Json& j) {
  Region r = Region::whole();
  for (const auto& m : j.at("masks")) {
    Coord c = coord_from_json(m.at("coord"));
    r = r.intersect(region_of_mask(
        m.at("mask").get<std::uint8_t>(),
        [&](Rel rel) { return Region::sign_of(c, rel); }));
  }
  for (const auto& a : j.at("cmps")) {
    Coord x = coord_from_json(a.at("a"));
    Coord y = coord_from_json(a.at("b"));
    r = r.intersect(a.at("equal").get<bool>() ? Region::coord_eq(x, y)
                                              : Region::coord_ne(x, y));
  }
  for (const auto& a : j.at("polys")) {
    std::vector<Coord> vars;
    for (const auto& v : a.at("vars")) vars.push_back(coord_from_json(v));
    MultiPoly p = multipoly_from_json(a.at("poly"));
    r = r.intersect(region_of_mask(
        a.at("mask").get<std::uint8_t>(),
        [&](Rel rel) { return Region::poly_sign(vars, p, rel); }));
  }
  return r;
}

Json presentation_to_json(const MonoidPresentation& p) {
  Json rels = Json::array();
  for (const auto& [l, rr] : p.relations)
    rels.push_back(Json::array({l, rr}));
  return Json{{"generators", p.generators}, {"relations", rels}};
}

MonoidPresentation presentation_from_json(const Json& j) {
  MonoidPresentation p;
  p.generators = j.at("generators").get<std::vector<std::string>>();
  for (const auto& r : j.at("relations"))
    p.relations.emplace_back(r.at(0).get<Word>(), r.at(1).get<Word>());
  return p;
}

Json conflict_to_json(const ConflictRelation& c) {
  Json pairs = Json::array();
  for (const auto& [a, b] : c.pairs) pairs.push_back(Json::array({a, b}));
  return Json{{"pairs", pairs}};
}

ConflictRelation conflict_from_json(const Json& j) {
  ConflictRelation c;
  for (const auto& p : j.at("pairs"))
    c.pairs.emplace(p.at(0).get<std::string>(), p.at(1).get<std::string>());
  return c;
}

namespace {

const char* kind_name(GenKind k) {
  switch (k) {
    case GenKind::Identity: return "identity";
    case GenKind::Const: return "const";
    case GenKind::Copy: return "copy";
    case GenKind::Add: return "add";
    case GenKind::Sub: return "sub";
    case GenKind::Mul: return "mul";
    case GenKind::EucliDiv: return "euclidiv";
    case GenKind::RealDiv: return "realdiv";
    case GenKind::Sqrt: return "sqrt";
    case GenKind::AddC: return "addc";
    case GenKind::SubC: return "subc";
    case GenKind::MulC: return "mulc";
    case GenKind::DivC: return "divc";
    case GenKind::ReadRef: return "readref";
    case GenKind::WriteRef: return "writeref";
    case GenKind::Tuple: return "tuple";
  }
  return "identity";
}

GenKind kind_of(const std::string& s) {
  for (int k = 0; k <= static_cast<int>(GenKind::Tuple); ++k)
    if (s == kind_name(static_cast<GenKind>(k))) return static_cast<GenKind>(k);
  throw std::invalid_argument("unknown generator kind: " + s);
}

}  // namespace

Json action_to_json(const GeneratorAction& a) {
  Json out{{"symbol", a.symbol},
           {"kind", kind_name(a.kind)},
           {"dst", coord_to_json(a.dst)},
           {"src1", coord_to_json(a.src1)},
           {"src2", coord_to_json(a.src2)},
           {"constant", rat_to_json(a.constant)},
           {"shared_block", a.shared_block},
           {"central", a.central}};
  if (a.kind == GenKind::Tuple) {
    Json parts = Json::array();
    for (const auto& p : a.parts) parts.push_back(action_to_json(p));
    out["parts"] = parts;
  }
  return out;
}

GeneratorAction action_from_json(const Json& j) {
  GeneratorAction a;
  a.symbol = j.at("symbol").get<std::string>();
  a.kind = kind_of(j.at("kind").get<std::string>());
  a.dst = coord_from_json(j.at("dst"));
  a.src1 = coord_from_json(j.at("src1"));
  a.src2 = coord_from_json(j.at("src2"));
  a.constant = rat_from_json(j.at("constant"));
  a.shared_block = j.at("shared_block").get<int>();
  a.central = j.at("central").get<bool>();
  if (j.contains("parts"))
    for (const auto& p : j.at("parts")) a.parts.push_back(action_from_json(p));
  return a;
}

Json amc_to_json(const Amc& a) {
  Json actions = Json::array();
  for (const auto& [sym, act] : a.actions) {
    (void)sym;
    actions.push_back(action_to_json(act));
  }
  Json blocks = Json::array();
  for (auto b : a.space.blocks)
    blocks.push_back(b == BlockKind::Integer ? "int" : "real");
  return Json{{"presentation", presentation_to_json(a.presentation)},
              {"actions", actions},
              {"blocks", blocks}};
}

Amc amc_from_json(const Json& j) {
  Amc a;
  a.presentation = presentation_from_json(j.at("presentation"));
  for (const auto& act : j.at("actions")) {
    GeneratorAction g = action_from_json(act);
    a.actions.emplace(g.symbol, std::move(g));
  }
  for (const auto& b : j.at("blocks")) {
    std::string s = b.get<std::string>();
    if (s == "int")
      a.space.blocks.push_back(BlockKind::Integer);
    else if (s == "real")
      a.space.blocks.push_back(BlockKind::Real);
    else
      throw std::invalid_argument("unknown block kind: " + s);
  }
  return a;
}

Json graphing_to_json(const GraphingRep& g) {
  Json edges = Json::array();
  for (const auto& e : g.edges)
    edges.push_back(Json{{"source", region_to_json(e.source)},
                         {"from", e.src_state},
                         {"realiser", e.realiser},
                         {"to", e.dst_state}});
  Json out{{"states", g.states}, {"edges", edges}};
  if (g.amc) out["amc"] = amc_to_json(*g.amc);
  if (g.top) out["top"] = *g.top;
  if (g.bottom) out["bottom"] = *g.bottom;
  return out;
}

GraphingRep graphing_from_json(const Json& j) {
  GraphingRep g;
  if (j.contains("amc"))
    g.amc = std::make_shared<Amc>(amc_from_json(j.at("amc")));
  g.states = j.at("states").get<std::vector<State>>();
  for (const auto& e : j.at("edges"))
    g.edges.push_back({region_from_json(e.at("source")),
                       e.at("from").get<State>(),
                       e.at("realiser").get<Word>(),
                       e.at("to").get<State>()});
  if (j.contains("top")) g.top = j.at("top").get<State>();
  if (j.contains("bottom")) g.bottom = j.at("bottom").get<State>();
  g.validate();
  return g;
}

Json polysystem_to_json(const PolySystem& s) {
  Json cs = Json::array();
  for (const auto& c : s.constraints) {
    Json jc{{"poly", multipoly_to_json(c.poly)},
            {"rel", rel_to_string(c.rel)},
            {"provenance", c.provenance}};
    if (c.defines) jc["defines"] = *c.defines;
    cs.push_back(jc);
  }
  return Json{{"vars", s.var_names},
              {"inputs", s.input_vars},
              {"constraints", cs}};
}

PolySystem polysystem_from_json(const Json& j) {
  PolySystem s;
  s.var_names = j.at("vars").get<std::vector<std::string>>();
  s.input_vars = j.at("inputs").get<std::vector<std::size_t>>();
  for (const auto& c : j.at("constraints")) {
    PolyConstraint pc;
    pc.poly = multipoly_from_json(c.at("poly"));
    pc.rel = parse_rel(c.at("rel").get<std::string>());
    pc.provenance = c.at("provenance").get<std::string>();
    if (c.contains("defines")) pc.defines = c.at("defines").get<std::size_t>();
    s.constraints.push_back(std::move(pc));
  }
  return s;
}

namespace {

std::string capacity_to_string(const ParamEdge& e) {
  return rat_to_string(e.a) + "*L+" + rat_to_string(e.b);
}

void capacity_from_string(const std::string& s, Rat& a, Rat& b) {
  static const std::regex kAffine(R"(^\s*(-?[0-9/]+)\*L([+-][0-9/]+)?\s*$)");
  std::smatch m;
  if (std::regex_match(s, m, kAffine)) {
    a = parse_rat(m[1].str());
    std::string rest = m[2].matched ? m[2].str() : "0";
    if (!rest.empty() && rest[0] == '+') rest.erase(0, 1);
    b = parse_rat(rest);
    return;
  }
  a = Rat(0);
  b = parse_rat(s);
}

}  // namespace

Json network_to_json(const ParamNetwork& n) {
  Json edges = Json::array();
  for (const auto& e : n.edges)
    edges.push_back(Json{{"from", n.nodes[e.from]},
                         {"to", n.nodes[e.to]},
                         {"capacity", capacity_to_string(e)}});
  return Json{{"nodes", n.nodes},
              {"edges", edges},
              {"source", n.nodes[n.source]},
              {"sink", n.nodes[n.sink]},
              {"interval", Json::array({rat_to_json(n.lo), rat_to_json(n.hi)})}};
}

ParamNetwork network_from_json(const Json& j) {
  ParamNetwork n;
  n.nodes = j.at("nodes").get<std::vector<std::string>>();
  auto index_of = [&](const std::string& name) -> std::size_t {
    for (std::size_t i = 0; i < n.nodes.size(); ++i)
      if (n.nodes[i] == name) return i;
    throw std::invalid_argument("unknown node: " + name);
  };
  for (const auto& e : j.at("edges")) {
    ParamEdge pe;
    pe.from = index_of(e.at("from").get<std::string>());
    pe.to = index_of(e.at("to").get<std::string>());
    capacity_from_string(e.at("capacity").get<std::string>(), pe.a, pe.b);
    n.edges.push_back(pe);
  }
  n.source = index_of(j.at("source").get<std::string>());
  n.sink = index_of(j.at("sink").get<std::string>());
  n.lo = rat_from_json(j.at("interval").at(0));
  n.hi = rat_from_json(j.at("interval").at(1));
  n.validate();
  return n;
}

Json fan_to_json(const RhoFan& f) {
  Json pts = Json::array();
  for (const auto& p : f.points)
    pts.push_back(Json::array({rat_to_json(p.x), rat_to_json(p.y)}));
  return Json{{"points", pts},
              {"rho", f.rho},
              {"beta", f.beta},
              {"convex", f.convex},
              {"concave", f.concave}};
}

RhoFan fan_from_json(const Json& j) {
  PLProfile p;
  for (const auto& pt : j.at("points"))
    p.points.push_back({rat_from_json(pt.at(0)), rat_from_json(pt.at(1))});
  return make_fan(p);
}

Json surface_to_json(const Surface& s) {
  return Json{{"poly", multipoly_to_json(s.poly)}};
}

Surface surface_from_json(const Json& j) {
  return {multipoly_from_json(j.at("poly"))};
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string cotree_to_dot(const CoTree& t) {
  std::ostringstream os;
  os << "digraph cotree {\n";
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    std::string label = i == 0 ? t.top : word_to_string(t.nodes[i].label);
    os << "  n" << i << " [label=\"" << dot_escape(label) << "\"];\n";
  }
  for (std::size_t i = 1; i < t.nodes.size(); ++i)
    os << "  n" << i << " -> n" << t.nodes[i].parent << ";\n";
  os << "}\n";
  return os.str();
}

std::string forest_to_dot(const Forest& f) {
  std::ostringstream os;
  os << "digraph forest {\n";
  for (std::size_t i = 0; i < f.nodes.size(); ++i) {
    std::ostringstream label;
    label << "d" << f.nodes[i].depth;
    if (f.nodes[i].edge) label << " e" << *f.nodes[i].edge;
    label << " (" << f.nodes[i].members.size() << ")";
    os << "  n" << i << " [label=\"" << dot_escape(label.str()) << "\"];\n";
  }
  for (const auto& [from, to] : f.arcs)
    os << "  n" << from << " -> n" << to << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace gmx
