#include "gmx/benor.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace gmx {

namespace {

struct Sexp {
  bool atom = true;
  std::string text;
  std::vector<Sexp> kids;
};

Sexp parse_sexp_at(const std::string& s, std::size_t& pos) {
  auto skip = [&] {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  };
  skip();
  if (pos >= s.size()) throw std::invalid_argument("unexpected end of input");
  if (s[pos] == '(') {
    ++pos;
    Sexp e;
    e.atom = false;
    for (skip(); pos < s.size() && s[pos] != ')'; skip())
      e.kids.push_back(parse_sexp_at(s, pos));
    if (pos >= s.size()) throw std::invalid_argument("missing )");
    ++pos;
    return e;
  }
  if (s[pos] == ')') throw std::invalid_argument("unexpected )");
  Sexp e;
  std::size_t start = pos;
  while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) &&
         s[pos] != '(' && s[pos] != ')')
    ++pos;
  e.text = s.substr(start, pos - start);
  return e;
}

Sexp parse_sexp(const std::string& s) {
  std::size_t pos = 0;
  Sexp e = parse_sexp_at(s, pos);
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
    ++pos;
  if (pos != s.size()) throw std::invalid_argument("trailing input");
  return e;
}

bool is_var_token(const std::string& t, char prefix, long& index) {
  if (t.size() < 2 || t[0] != prefix) return false;
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
  index = std::stol(t.substr(1));
  return true;
}

MultiPoly poly_pow(const MultiPoly& p, unsigned e) {
  MultiPoly out = MultiPoly::constant(Rat(1));
  for (unsigned i = 0; i < e; ++i) out = out * p;
  return out;
}

/// Polynomial expression over x1..xn (variable i-1).
MultiPoly parse_poly(const Sexp& e, int n) {
  if (e.atom) {
    long idx;
    if (is_var_token(e.text, 'x', idx)) {
      if (idx < 1 || idx > n)
        throw std::invalid_argument("variable out of range: " + e.text);
      return MultiPoly::variable(static_cast<std::size_t>(idx - 1));
    }
    return MultiPoly::constant(parse_rat(e.text));
  }
  if (e.kids.empty() || !e.kids[0].atom)
    throw std::invalid_argument("malformed polynomial expression");
  const std::string& op = e.kids[0].text;
  if (op == "+" || op == "*") {
    MultiPoly acc = MultiPoly::constant(Rat(op == "+" ? 0 : 1));
    for (std::size_t i = 1; i < e.kids.size(); ++i) {
      MultiPoly p = parse_poly(e.kids[i], n);
      acc = op == "+" ? acc + p : acc * p;
    }
    return acc;
  }
  if (op == "-") {
    if (e.kids.size() == 2) return -parse_poly(e.kids[1], n);
    if (e.kids.size() == 3)
      return parse_poly(e.kids[1], n) - parse_poly(e.kids[2], n);
    throw std::invalid_argument("- takes one or two arguments");
  }
  if (op == "^") {
    if (e.kids.size() != 3 || !e.kids[2].atom)
      throw std::invalid_argument("^ takes a base and an exponent");
    return poly_pow(parse_poly(e.kids[1], n), std::stoul(e.kids[2].text));
  }
  throw std::invalid_argument("unknown polynomial operator: " + op);
}

int build_adt(const Sexp& e, int n, std::vector<AdtNode>& nodes) {
  if (e.atom) {
    if (e.text != "yes" && e.text != "no")
      throw std::invalid_argument("leaf must be yes or no: " + e.text);
    AdtNode leaf;
    leaf.leaf = true;
    leaf.yes = e.text == "yes";
    nodes.push_back(leaf);
    return static_cast<int>(nodes.size()) - 1;
  }
  if (e.kids.size() != 5 || !e.kids[0].atom || e.kids[0].text != "test")
    throw std::invalid_argument("expected (test POLY LT EQ GT)");
  int idx = static_cast<int>(nodes.size());
  nodes.emplace_back();
  nodes[idx].poly = parse_poly(e.kids[1], n);
  nodes[idx].lt = build_adt(e.kids[2], n, nodes);
  nodes[idx].eq = build_adt(e.kids[3], n, nodes);
  nodes[idx].gt = build_adt(e.kids[4], n, nodes);
  return idx;
}

}  // namespace

int AlgDecisionTree::height() const {
  std::function<int(int)> h = [&](int idx) {
    const AdtNode& node = nodes[static_cast<std::size_t>(idx)];
    if (node.leaf) return 0;
    return 1 + std::max({h(node.lt), h(node.eq), h(node.gt)});
  };
  return nodes.empty() ? 0 : h(0);
}

void AlgDecisionTree::validate() const {
  for (const auto& node : nodes) {
    if (node.leaf) continue;
    for (int c : {node.lt, node.eq, node.gt})
      if (c < 0 || c >= static_cast<int>(nodes.size()))
        throw std::invalid_argument("bad child index");
    if (node.poly.total_degree() > order)
      throw std::invalid_argument("node degree exceeds declared order");
  }
}

AlgDecisionTree parse_adt(const std::string& text, int n, int order) {
  AlgDecisionTree t;
  t.n = n;
  t.order = order;
  build_adt(parse_sexp(text), n, t.nodes);
  t.validate();
  return t;
}

namespace {

ActNode::Operand parse_operand(const Sexp& e, int n,
                               const std::vector<bool>& defined) {
  if (!e.atom) throw std::invalid_argument("operand must be atomic");
  ActNode::Operand o;
  long idx;
  if (is_var_token(e.text, 'x', idx)) {
    if (idx < 1 || idx > n)
      throw std::invalid_argument("input out of range: " + e.text);
    o.reg = idx;
    return o;
  }
  if (is_var_token(e.text, 'v', idx)) {
    o.reg = n + idx;
    if (static_cast<std::size_t>(o.reg) >= defined.size() ||
        !defined[static_cast<std::size_t>(o.reg)])
      throw std::invalid_argument("operand not yet computed: " + e.text);
    return o;
  }
  o.is_const = true;
  o.c = parse_rat(e.text);
  return o;
}

int build_act(const Sexp& e, int n, std::vector<ActNode>& nodes,
              std::vector<bool> defined) {
  if (e.atom) {
    if (e.text != "yes" && e.text != "no")
      throw std::invalid_argument("leaf must be yes or no: " + e.text);
    ActNode leaf;
    leaf.kind = ActNode::Kind::Leaf;
    leaf.yes = e.text == "yes";
    nodes.push_back(leaf);
    return static_cast<int>(nodes.size()) - 1;
  }
  if (e.kids.empty() || !e.kids[0].atom)
    throw std::invalid_argument("malformed tree node");
  const std::string& head = e.kids[0].text;
  if (head == "let") {
    if (e.kids.size() != 4 || !e.kids[1].atom || e.kids[2].atom)
      throw std::invalid_argument("expected (let vK (OP ...) BODY)");
    long vk;
    if (!is_var_token(e.kids[1].text, 'v', vk))
      throw std::invalid_argument("let target must be v<K>");
    const Sexp& rhs = e.kids[2];
    if (rhs.kids.empty() || !rhs.kids[0].atom)
      throw std::invalid_argument("malformed operation");
    int idx = static_cast<int>(nodes.size());
    nodes.emplace_back();
    nodes[idx].kind = ActNode::Kind::Let;
    nodes[idx].op = rhs.kids[0].text;
    nodes[idx].target = n + vk;
    if (nodes[idx].op == "sqrt") {
      if (rhs.kids.size() != 2)
        throw std::invalid_argument("sqrt takes one operand");
      nodes[idx].a = parse_operand(rhs.kids[1], n, defined);
    } else if (rhs.kids.size() == 3 &&
               (nodes[idx].op == "+" || nodes[idx].op == "-" ||
                nodes[idx].op == "*" || nodes[idx].op == "/")) {
      nodes[idx].a = parse_operand(rhs.kids[1], n, defined);
      nodes[idx].b = parse_operand(rhs.kids[2], n, defined);
    } else {
      throw std::invalid_argument("unknown operation: " + nodes[idx].op);
    }
    if (static_cast<std::size_t>(nodes[idx].target) >= defined.size())
      defined.resize(static_cast<std::size_t>(nodes[idx].target) + 1, false);
    defined[static_cast<std::size_t>(nodes[idx].target)] = true;
    nodes[idx].child = build_act(e.kids[3], n, nodes, defined);
    return idx;
  }
  if (head == "branch") {
    if (e.kids.size() != 4 || e.kids[1].atom ||
        e.kids[1].kids.size() != 2 || !e.kids[1].kids[0].atom)
      throw std::invalid_argument("expected (branch (REL A) YES NO)");
    int idx = static_cast<int>(nodes.size());
    nodes.emplace_back();
    nodes[idx].kind = ActNode::Kind::Branch;
    const std::string& rel = e.kids[1].kids[0].text;
    if (rel == ">")
      nodes[idx].rel = Rel::Gt;
    else if (rel == "=")
      nodes[idx].rel = Rel::Eq;
    else if (rel == ">=")
      nodes[idx].rel = Rel::Ge;
    else
      throw std::invalid_argument("test must be > = or >=, got " + rel);
    ActNode::Operand t = parse_operand(e.kids[1].kids[1], n, defined);
    if (t.is_const) throw std::invalid_argument("cannot test a constant");
    nodes[idx].test_reg = t.reg;
    nodes[idx].yes_child = build_act(e.kids[2], n, nodes, defined);
    nodes[idx].no_child = build_act(e.kids[3], n, nodes, defined);
    return idx;
  }
  throw std::invalid_argument("unknown node kind: " + head);
}

}  // namespace

int AlgComputationTree::height() const {
  std::function<int(int)> h = [&](int idx) -> int {
    const ActNode& node = nodes[static_cast<std::size_t>(idx)];
    switch (node.kind) {
      case ActNode::Kind::Leaf:
        return 0;
      case ActNode::Kind::Let:
        return 1 + h(node.child);
      case ActNode::Kind::Branch:
        return 1 + std::max(h(node.yes_child), h(node.no_child));
    }
    return 0;
  };
  return nodes.empty() ? 0 : h(0);
}

void AlgComputationTree::validate() const {
  for (const auto& node : nodes) {
    std::vector<int> kids;
    if (node.kind == ActNode::Kind::Let) kids = {node.child};
    if (node.kind == ActNode::Kind::Branch)
      kids = {node.yes_child, node.no_child};
    for (int c : kids)
      if (c < 0 || c >= static_cast<int>(nodes.size()))
        throw std::invalid_argument("bad child index");
  }
}

AlgComputationTree parse_act(const std::string& text, int n) {
  AlgComputationTree t;
  t.n = n;
  std::vector<bool> defined(static_cast<std::size_t>(n) + 1, true);
  build_act(parse_sexp(text), n, t.nodes, defined);
  t.validate();
  return t;
}

GraphingRep interpret_adt(const AlgDecisionTree& t) {
  t.validate();
  GraphingRep g;
  g.amc = std::make_shared<Amc>(act_amc({}));
  std::vector<Coord> coords;
  for (int i = 1; i <= t.n; ++i) coords.push_back({0, i});
  auto state_of = [&](int idx) -> State {
    const AdtNode& node = t.nodes[static_cast<std::size_t>(idx)];
    if (node.leaf) return node.yes ? "T" : "F";
    return "n" + std::to_string(idx);
  };
  for (std::size_t i = 0; i < t.nodes.size(); ++i)
    if (!t.nodes[i].leaf)
      g.states.push_back("n" + std::to_string(i));
  g.states.push_back("F");
  g.states.push_back("T");
  g.bottom = "F";
  g.top = "T";
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const AdtNode& node = t.nodes[i];
    if (node.leaf) continue;
    State src = "n" + std::to_string(i);
    g.edges.push_back({Region::poly_sign(coords, node.poly, Rel::Lt), src,
                       {}, state_of(node.lt)});
    g.edges.push_back({Region::poly_sign(coords, node.poly, Rel::Eq), src,
                       {}, state_of(node.eq)});
    g.edges.push_back({Region::poly_sign(coords, node.poly, Rel::Gt), src,
                       {}, state_of(node.gt)});
  }
  g.validate();
  return g;
}

namespace {

Rel complement_rel(Rel r) {
  switch (r) {
    case Rel::Gt: return Rel::Le;
    case Rel::Ge: return Rel::Lt;
    case Rel::Eq: return Rel::Ne;
    case Rel::Ne: return Rel::Eq;
    case Rel::Lt: return Rel::Ge;
    case Rel::Le: return Rel::Gt;
  }
  return Rel::Eq;
}

std::string rat_arg(const Rat& c) { return rat_to_string(c); }

}  // namespace

GraphingRep interpret_act(const AlgComputationTree& t) {
  t.validate();
  GraphingRep g;
  std::vector<std::string> symbols;
  auto symbol = [&](const std::string& s) {
    if (std::find(symbols.begin(), symbols.end(), s) == symbols.end())
      symbols.push_back(s);
    return s;
  };
  auto state_of = [&](int idx) -> State {
    const ActNode& node = t.nodes[static_cast<std::size_t>(idx)];
    if (node.kind == ActNode::Kind::Leaf) return node.yes ? "T" : "F";
    return std::to_string(t.n + 1 + idx);
  };
  for (std::size_t i = 0; i < t.nodes.size(); ++i)
    if (t.nodes[i].kind != ActNode::Kind::Leaf)
      g.states.push_back(std::to_string(t.n + 1 + static_cast<int>(i)));
  g.states.push_back("F");
  g.states.push_back("T");
  g.bottom = "F";
  g.top = "T";

  struct Pending {
    Region source;
    std::string sym;
    State src, dst;
  };
  std::vector<Pending> pending;
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const ActNode& node = t.nodes[i];
    if (node.kind == ActNode::Kind::Leaf) continue;
    State src = std::to_string(t.n + 1 + static_cast<int>(i));
    if (node.kind == ActNode::Kind::Branch) {
      Coord c{0, node.test_reg};
      pending.push_back({Region::sign_of(c, node.rel), "", src,
                         state_of(node.yes_child)});
      pending.push_back({Region::sign_of(c, complement_rel(node.rel)), "",
                         src, state_of(node.no_child)});
      continue;
    }
    long ti = node.target;
    const auto& a = node.a;
    const auto& b = node.b;
    Region source = Region::whole();
    std::ostringstream sym;
    if (node.op == "sqrt") {
      if (a.is_const) throw std::invalid_argument("sqrt of a constant");
      sym << "sqrt(" << ti << "," << a.reg << ")";
      source = Region::sign_of({0, a.reg}, Rel::Ge);
    } else if (a.is_const && b.is_const) {
      Rat v = a.c;
      if (node.op == "+") v = a.c + b.c;
      if (node.op == "-") v = a.c - b.c;
      if (node.op == "*") v = a.c * b.c;
      if (node.op == "/") {
        if (b.c == 0) throw std::invalid_argument("constant division by 0");
        v = a.c / b.c;
      }
      sym << "const(" << ti << "," << rat_arg(v) << ")";
    } else if (!a.is_const && !b.is_const) {
      std::string name = node.op == "+"   ? "add"
                         : node.op == "-" ? "sub"
                         : node.op == "*" ? "mul"
                                          : "div";
      sym << name << "(" << ti << "," << a.reg << "," << b.reg << ")";
      if (node.op == "/") source = Region::sign_of({0, b.reg}, Rel::Ne);
    } else if (a.is_const) {
      std::string name = node.op == "+"   ? "addc"
                         : node.op == "-" ? "subc"
                         : node.op == "*" ? "mulc"
                                          : "divc";
      sym << name << "(" << ti << "," << rat_arg(a.c) << "," << b.reg << ")";
      if (node.op == "/") source = Region::sign_of({0, b.reg}, Rel::Ne);
    } else {  // constant on the right
      if (node.op == "/") {
        if (b.c == 0) throw std::invalid_argument("division by constant 0");
        sym << "mulc(" << ti << "," << rat_arg(Rat(1) / b.c) << "," << a.reg
            << ")";
      } else if (node.op == "-") {
        sym << "addc(" << ti << "," << rat_arg(-b.c) << "," << a.reg << ")";
      } else {
        sym << (node.op == "+" ? "addc" : "mulc") << "(" << ti << ","
            << rat_arg(b.c) << "," << a.reg << ")";
      }
    }
    pending.push_back({source, symbol(sym.str()), src, state_of(node.child)});
  }
  g.amc = std::make_shared<Amc>(act_amc(symbols));
  for (auto& p : pending) {
    Word w;
    if (!p.sym.empty()) w.push_back(p.sym);
    g.edges.push_back({p.source, p.src, w, p.dst});
  }
  g.validate();
  return g;
}

RealMate real_mate(const GraphingRep& t) {
  if (!is_treeing(t)) throw std::invalid_argument("real mate needs a treeing");
  if (!t.amc) throw std::invalid_argument("graphing has no ambient amc");
  RealMate out;
  out.y_block = static_cast<int>(t.amc->space.blocks.size());

  Amc amc;
  amc.presentation = t.amc->presentation;
  amc.actions = t.amc->actions;
  amc.space.blocks.assign(t.amc->space.blocks.size() + 1, BlockKind::Real);

  // find the division edges and check they carry nothing else
  std::vector<const GeneratorAction*> div_actions;
  for (std::size_t i = 0; i < t.edges.size(); ++i) {
    bool has_div = false;
    for (const auto& g : t.edges[i].realiser)
      if (t.amc->actions.at(g).kind == GenKind::EucliDiv) has_div = true;
    if (!has_div) continue;
    if (t.edges[i].realiser.size() != 1)
      throw std::invalid_argument(
          "division edge realiser must be a single generator");
    out.division_edges.push_back(i);
    div_actions.push_back(&t.amc->actions.at(t.edges[i].realiser[0]));
  }

  // four copies of every control state, in blocks, copy 1 first
  GraphingRep& g = out.graphing;
  auto copy_name = [](const State& s, int c) {
    return s + "|" + std::to_string(c);
  };
  for (const auto& s : t.states)
    for (int c = 1; c <= 4; ++c) g.states.push_back(copy_name(s, c));
  if (t.top) g.top = copy_name(*t.top, 1);
  if (t.bottom) g.bottom = copy_name(*t.bottom, 1);

  for (std::size_t i = 0; i < t.edges.size(); ++i) {
    const Edge& e = t.edges[i];
    auto div_pos = std::find(out.division_edges.begin(),
                             out.division_edges.end(), i);
    if (div_pos == out.division_edges.end()) {
      g.edges.push_back({e.source, copy_name(e.src_state, 1), e.realiser,
                         copy_name(e.dst_state, 1)});
      continue;
    }
    long n = (div_pos - out.division_edges.begin()) + 1;
    const GeneratorAction& d =
        *div_actions[static_cast<std::size_t>(n - 1)];
    Coord y0{out.y_block, 2 * n};
    Coord y1{out.y_block, 2 * n + 1};

    GeneratorAction sub;
    sub.symbol = "mate.sub(" + std::to_string(n) + ")";
    sub.kind = GenKind::Sub;
    sub.dst = y1;
    sub.src1 = d.src1;  // x_j
    sub.src2 = y0;
    GeneratorAction div;
    div.symbol = "mate.div(" + std::to_string(n) + ")";
    div.kind = GenKind::RealDiv;
    div.dst = d.dst;  // x_i
    div.src1 = y1;
    div.src2 = d.src2;  // x_k
    for (auto* a : {&sub, &div}) {
      amc.presentation.generators.push_back(a->symbol);
      amc.actions.emplace(a->symbol, *a);
    }

    // remainder bounds, then the subtraction and the exact division
    g.edges.push_back({e.source.intersect(Region::sign_of(y0, Rel::Ge)),
                       copy_name(e.src_state, 1), {},
                       copy_name(e.src_state, 2)});
    MultiPoly lt = MultiPoly::variable(0) - MultiPoly::variable(1);
    g.edges.push_back({Region::poly_sign({d.src2, y0}, lt, Rel::Gt),
                       copy_name(e.src_state, 2), {},
                       copy_name(e.src_state, 3)});
    g.edges.push_back({Region::whole(), copy_name(e.src_state, 3),
                       {sub.symbol}, copy_name(e.src_state, 4)});
    g.edges.push_back({Region::sign_of(d.src2, Rel::Ne),
                       copy_name(e.src_state, 4), {div.symbol},
                       copy_name(e.dst_state, 1)});
  }
  g.amc = std::make_shared<Amc>(std::move(amc));
  g.validate();
  return out;
}

Memory seed_witnesses(const GraphingRep& t, const RealMate& m,
                      const ConfigPoint& start, int budget) {
  Memory out = start.mem;
  ConfigPoint cur = start;
  for (int i = 0; i < budget; ++i) {
    StepResult r = step(t, cur);
    if (r.halted) break;
    auto pos = std::find(m.division_edges.begin(), m.division_edges.end(),
                         *r.edge);
    if (pos != m.division_edges.end()) {
      long n = (pos - m.division_edges.begin()) + 1;
      const GeneratorAction& d =
          t.amc->actions.at(t.edges[*r.edge].realiser[0]);
      Rat a = cur.mem.get(d.src1), b = cur.mem.get(d.src2);
      Rat rem = a - b * Rat(euclidean_div(a.get_num(), b.get_num()));
      out.set({m.y_block, 2 * n}, rem);
    }
    cur = std::move(r.point);
  }
  return out;
}

namespace {

struct Extractor {
  const GraphingRep& g;
  PolySystem sys;
  std::map<std::pair<Coord, int>, std::size_t> var_index;
  std::map<Coord, int> version;
  std::vector<Coord> inputs;
  int fresh = 0;

  std::size_t var(const Coord& c, int v) {
    auto key = std::make_pair(c, v);
    auto it = var_index.find(key);
    if (it != var_index.end()) return it->second;
    std::size_t idx = sys.var_names.size();
    sys.var_names.push_back(coord_to_string(c) + "@" + std::to_string(v));
    var_index[key] = idx;
    return idx;
  }

  MultiPoly cur(const Coord& c) {
    int v = version.count(c) ? version.at(c) : 0;
    if (v == 0 &&
        std::find(inputs.begin(), inputs.end(), c) == inputs.end())
      return MultiPoly();  // untouched non-input cells hold 0
    return MultiPoly::variable(var(c, v));
  }

  std::size_t bump(const Coord& c) {
    int v = (version.count(c) ? version.at(c) : 0) + 1;
    version[c] = v;
    return var(c, v);
  }

  std::size_t fresh_var() {
    std::size_t idx = sys.var_names.size();
    sys.var_names.push_back("z" + std::to_string(++fresh));
    return idx;
  }

  void guard(const MultiPoly& p, Rel rel, const std::string& where) {
    if (rel == Rel::Ne) {
      std::size_t z = fresh_var();
      PolyConstraint c;
      c.poly = MultiPoly::variable(z) * p - MultiPoly::constant(Rat(1));
      c.rel = Rel::Eq;
      c.provenance = where;
      c.defines = z;
      sys.constraints.push_back(std::move(c));
      return;
    }
    sys.constraints.push_back({p, rel, where, std::nullopt});
  }

  void source_guards(const Region& r, const std::string& where) {
    for (const auto& [c, mask] : r.coord_masks()) {
      auto rel = signmask::to_rel(mask);
      if (!rel) {
        if (mask != signmask::kAll)
          throw std::invalid_argument("unsupported sign mask");
        continue;
      }
      guard(cur(c), *rel, where);
    }
    for (const auto& a : r.cmp_atoms())
      guard(cur(a.a) - cur(a.b), a.equal ? Rel::Eq : Rel::Ne, where);
    for (const auto& a : r.poly_atoms()) {
      auto rel = signmask::to_rel(a.mask);
      if (!rel) {
        if (a.mask != signmask::kAll)
          throw std::invalid_argument("unsupported sign mask");
        continue;
      }
      MultiPoly p;
      for (const auto& [mono, coeff] : a.poly.terms()) {
        MultiPoly term = MultiPoly::constant(coeff);
        for (std::size_t j = 0; j < mono.size(); ++j)
          for (unsigned e = 0; e < mono[j]; ++e) term = term * cur(a.vars[j]);
        p = p + term;
      }
      guard(p, *rel, where);
    }
  }

  void define(const Coord& dst, const MultiPoly& expr,
              const std::string& where) {
    std::size_t nv = bump(dst);
    PolyConstraint c;
    c.poly = MultiPoly::variable(nv) - expr;
    c.rel = Rel::Eq;
    c.provenance = where;
    c.defines = nv;
    sys.constraints.push_back(std::move(c));
  }

  void apply(const GeneratorAction& a, const std::string& where) {
    switch (a.kind) {
      case GenKind::Identity:
        return;
      case GenKind::Const:
        define(a.dst, MultiPoly::constant(a.constant), where);
        return;
      case GenKind::Copy:
        define(a.dst, cur(a.src1), where);
        return;
      case GenKind::Add:
        define(a.dst, cur(a.src1) + cur(a.src2), where);
        return;
      case GenKind::Sub:
        define(a.dst, cur(a.src1) - cur(a.src2), where);
        return;
      case GenKind::Mul:
        define(a.dst, cur(a.src1) * cur(a.src2), where);
        return;
      case GenKind::AddC:
        define(a.dst, MultiPoly::constant(a.constant) + cur(a.src1), where);
        return;
      case GenKind::SubC:
        define(a.dst, MultiPoly::constant(a.constant) - cur(a.src1), where);
        return;
      case GenKind::MulC:
        define(a.dst, cur(a.src1).scale(a.constant), where);
        return;
      case GenKind::RealDiv: {
        MultiPoly num = cur(a.src1), den = cur(a.src2);
        std::size_t nv = bump(a.dst);
        PolyConstraint c;
        c.poly = MultiPoly::variable(nv) * den - num;
        c.rel = Rel::Eq;
        c.provenance = where;
        c.defines = nv;
        sys.constraints.push_back(std::move(c));
        return;
      }
      case GenKind::DivC: {
        MultiPoly den = cur(a.src1);
        std::size_t nv = bump(a.dst);
        PolyConstraint c;
        c.poly = MultiPoly::variable(nv) * den -
                 MultiPoly::constant(a.constant);
        c.rel = Rel::Eq;
        c.provenance = where;
        c.defines = nv;
        sys.constraints.push_back(std::move(c));
        return;
      }
      case GenKind::Sqrt: {
        MultiPoly arg = cur(a.src1);
        std::size_t nv = bump(a.dst);
        MultiPoly v = MultiPoly::variable(nv);
        PolyConstraint c;
        c.poly = v * v - arg;
        c.rel = Rel::Eq;
        c.provenance = where;
        c.defines = nv;
        sys.constraints.push_back(std::move(c));
        sys.constraints.push_back({v, Rel::Ge, where, std::nullopt});
        return;
      }
      case GenKind::Tuple: {
        // snapshot reads: compute every expression before bumping versions
        std::vector<std::pair<const GeneratorAction*, MultiPoly>> writes;
        for (const auto& part : a.parts) {
          switch (part.kind) {
            case GenKind::Identity:
              break;
            case GenKind::Const:
              writes.emplace_back(&part, MultiPoly::constant(part.constant));
              break;
            case GenKind::Copy:
              writes.emplace_back(&part, cur(part.src1));
              break;
            case GenKind::Add:
              writes.emplace_back(&part, cur(part.src1) + cur(part.src2));
              break;
            case GenKind::Sub:
              writes.emplace_back(&part, cur(part.src1) - cur(part.src2));
              break;
            case GenKind::Mul:
              writes.emplace_back(&part, cur(part.src1) * cur(part.src2));
              break;
            default:
              throw std::invalid_argument("unsupported generator: " +
                                          part.symbol);
          }
        }
        for (const auto& [part, expr] : writes) define(part->dst, expr, where);
        return;
      }
      default:
        throw std::invalid_argument("unsupported generator: " + a.symbol);
    }
  }
};

}  // namespace

int PolySystem::max_degree() const {
  int d = 0;
  for (const auto& c : constraints) d = std::max(d, c.poly.total_degree());
  return d;
}

std::size_t PolySystem::equation_count() const {
  std::size_t n = 0;
  for (const auto& c : constraints)
    if (c.rel == Rel::Eq) ++n;
  return n;
}

PolySystem extract_polysystem(const GraphingRep& g,
                              const std::vector<std::size_t>& edge_path,
                              const std::vector<Coord>& inputs) {
  Extractor ex{g};
  ex.inputs = inputs;
  for (const auto& c : inputs) ex.sys.input_vars.push_back(ex.var(c, 0));
  for (std::size_t pos = 0; pos < edge_path.size(); ++pos) {
    const Edge& e = g.edges[edge_path[pos]];
    std::string where =
        "edge " + std::to_string(edge_path[pos]) + " at " +
        std::to_string(pos);
    ex.source_guards(e.source, where);
    for (const auto& gen : e.realiser)
      ex.apply(g.amc->actions.at(gen), where);
  }
  return std::move(ex.sys);
}

Int benor_bound(int d, int n, int h) {
  if (d < 2) throw std::invalid_argument("benor bound requires d >= 2");
  if (n < 1 || h < 0) throw std::invalid_argument("bad arity or height");
  Int base = 2 * d - 1;
  return Int(d) * pow_int(base, static_cast<unsigned>(n + h - 1));
}

Int steele_yao_bound(int h, int d, int n) {
  return pow2(static_cast<unsigned>(h)) * benor_bound(d, n, h);
}

Int graphing_benor_bound(const Int& h0_count, int k, int D, int n) {
  if (k < 1 || D < 1 || n < 1)
    throw std::invalid_argument("k, D, n must be >= 1");
  return 2 * h0_count *
         pow_int(Int(3), static_cast<unsigned>(2 * k * D + n + 1));
}

int algebraic_degree(const GraphingRep& g) {
  std::size_t best = 0;
  for (const auto& e : g.edges) {
    std::size_t len =
        g.amc ? normalize_word(g.amc->presentation, e.realiser).size()
              : e.realiser.size();
    best = std::max(best, len);
  }
  return static_cast<int>(best);
}

namespace {

/// Rational function of the single free variable.
struct RatFn {
  UniPoly num;
  UniPoly den = UniPoly::constant(Rat(1));
};

RatFn fn_add(const RatFn& a, const RatFn& b) {
  return {a.num * b.den + b.num * a.den, a.den * b.den};
}
RatFn fn_mul(const RatFn& a, const RatFn& b) {
  return {a.num * b.num, a.den * b.den};
}
RatFn fn_scale(const RatFn& a, const Rat& c) { return {a.num.scale(c), a.den}; }

/// Splits a polynomial as A*v + B where v is the variable `pivot` and A, B
/// do not involve it; rejects higher powers of v.
void split_linear(const MultiPoly& p, std::size_t pivot, MultiPoly& a,
                  MultiPoly& b) {
  a = MultiPoly();
  b = MultiPoly();
  for (const auto& [mono, coeff] : p.terms()) {
    unsigned e = pivot < mono.size() ? mono[pivot] : 0;
    MultiPoly::Monomial rest = mono;
    if (pivot < rest.size()) rest[pivot] = 0;
    while (!rest.empty() && rest.back() == 0) rest.pop_back();
    if (e == 0) {
      MultiPoly t;
      t.set_term(rest, coeff);
      b = b + t;
    } else if (e == 1) {
      MultiPoly t;
      t.set_term(rest, coeff);
      a = a + t;
    } else {
      throw std::invalid_argument("definition is not linear in its variable");
    }
  }
}

RatFn substitute_fns(const MultiPoly& p, const std::vector<std::optional<RatFn>>& fns) {
  RatFn acc{UniPoly(), UniPoly::constant(Rat(1))};
  for (const auto& [mono, coeff] : p.terms()) {
    RatFn term{UniPoly::constant(coeff), UniPoly::constant(Rat(1))};
    for (std::size_t j = 0; j < mono.size(); ++j)
      for (unsigned e = 0; e < mono[j]; ++e) {
        if (j >= fns.size() || !fns[j])
          throw std::invalid_argument("constraint uses an unsolved variable");
        term = fn_mul(term, *fns[j]);
      }
    acc = fn_add(acc, term);
  }
  return acc;
}

void push_sign_condition(std::vector<std::pair<UniPoly, Rel>>& out,
                         const RatFn& f, Rel rel) {
  const UniPoly& p = f.num;
  const UniPoly& q = f.den;
  switch (rel) {
    case Rel::Eq:
      out.emplace_back(p, Rel::Eq);
      out.emplace_back(q, Rel::Ne);
      break;
    case Rel::Ne:
      out.emplace_back(p, Rel::Ne);
      out.emplace_back(q, Rel::Ne);
      break;
    case Rel::Gt:
      out.emplace_back(p * q, Rel::Gt);
      break;
    case Rel::Lt:
      out.emplace_back(p * q, Rel::Lt);
      break;
    case Rel::Ge:
      out.emplace_back(p * q, Rel::Ge);
      out.emplace_back(q, Rel::Ne);
      break;
    case Rel::Le:
      out.emplace_back(p * q, Rel::Le);
      out.emplace_back(q, Rel::Ne);
      break;
  }
}

}  // namespace

int count_components_1d(const PolySystem& system) {
  if (system.input_vars.size() != 1)
    throw std::invalid_argument("system must have exactly one input variable");
  std::vector<std::optional<RatFn>> fns(system.var_names.size());
  fns[system.input_vars[0]] = RatFn{UniPoly::variable(),
                                    UniPoly::constant(Rat(1))};
  std::vector<std::pair<UniPoly, Rel>> constraints;
  for (const auto& c : system.constraints) {
    if (c.defines) {
      MultiPoly a, b;
      split_linear(c.poly, *c.defines, a, b);
      RatFn fa = substitute_fns(a, fns);
      RatFn fb = substitute_fns(b, fns);
      if (fa.num.is_zero())
        throw std::invalid_argument("degenerate definition");
      // a*v + b = 0  =>  v = -b/a, defined where a != 0
      fns[*c.defines] = RatFn{-(fb.num * fa.den), fb.den * fa.num};
      push_sign_condition(constraints, fa, Rel::Ne);
      continue;
    }
    push_sign_condition(constraints, substitute_fns(c.poly, fns), c.rel);
  }
  // constant constraints decide globally
  std::vector<std::pair<UniPoly, Rel>> live;
  for (auto& [p, rel] : constraints) {
    if (p.degree() <= 0) {
      int s = p.is_zero() ? 0 : sign(p.coeff(0));
      if (!rel_holds(s, rel)) return 0;
      continue;
    }
    live.emplace_back(std::move(p), rel);
  }
  return count_interval_components(live);
}

int count_components_grid(const PolySystem& system, const GridBox& box,
                          int resolution) {
  std::size_t d = system.input_vars.size();
  if (box.bounds.size() != d)
    throw std::invalid_argument("box dimension mismatch");
  if (resolution < 1) throw std::invalid_argument("resolution must be >= 1");

  auto satisfied = [&](const std::vector<Rat>& point) {
    std::vector<std::optional<Rat>> vals(system.var_names.size());
    for (std::size_t i = 0; i < d; ++i)
      vals[system.input_vars[i]] = point[i];
    auto eval = [&](const MultiPoly& p) -> std::optional<Rat> {
      Rat acc(0);
      for (const auto& [mono, coeff] : p.terms()) {
        Rat term = coeff;
        for (std::size_t j = 0; j < mono.size(); ++j)
          for (unsigned e = 0; e < mono[j]; ++e) {
            if (j >= vals.size() || !vals[j]) return std::nullopt;
            term *= *vals[j];
          }
        acc += term;
      }
      return acc;
    };
    for (const auto& c : system.constraints) {
      if (c.defines) {
        MultiPoly a, b;
        split_linear(c.poly, *c.defines, a, b);
        auto va = eval(a), vb = eval(b);
        if (!va || !vb || *va == 0) return false;
        vals[*c.defines] = -*vb / *va;
        continue;
      }
      auto v = eval(c.poly);
      if (!v || !rel_holds(sign(*v), c.rel)) return false;
    }
    return true;
  };

  std::vector<std::size_t> dims(d, static_cast<std::size_t>(resolution));
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= dims[i];
  std::vector<char> sat(total, 0);
  std::vector<std::size_t> idx(d, 0);
  for (std::size_t cell = 0; cell < total; ++cell) {
    std::vector<Rat> point(d);
    std::size_t rest = cell;
    for (std::size_t i = 0; i < d; ++i) {
      idx[i] = rest % dims[i];
      rest /= dims[i];
      Rat lo = box.bounds[i].first, hi = box.bounds[i].second;
      point[i] = lo + (hi - lo) * make_rat(2 * static_cast<long>(idx[i]) + 1,
                                           2 * resolution);
    }
    sat[cell] = satisfied(point) ? 1 : 0;
  }

  // flood fill over axis neighbors
  int components = 0;
  std::vector<char> seen(total, 0);
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < total; ++start) {
    if (!sat[start] || seen[start]) continue;
    ++components;
    stack.push_back(start);
    seen[start] = 1;
    while (!stack.empty()) {
      std::size_t cell = stack.back();
      stack.pop_back();
      std::size_t rest = cell, stride = 1;
      for (std::size_t i = 0; i < d; ++i) {
        std::size_t coord = rest % dims[i];
        rest /= dims[i];
        for (long delta : {-1L, 1L}) {
          if (delta < 0 && coord == 0) continue;
          if (delta > 0 && coord + 1 >= dims[i]) continue;
          std::size_t nb = delta < 0 ? cell - stride : cell + stride;
          if (sat[nb] && !seen[nb]) {
            seen[nb] = 1;
            stack.push_back(nb);
          }
        }
        stride *= dims[i];
      }
    }
  }
  return components;
}

}  // namespace gmx
