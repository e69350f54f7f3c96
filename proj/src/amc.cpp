#include "gmx/amc.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace gmx {

std::string word_to_string(const Word& w) {
  std::ostringstream os;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) os << " ";
    os << w[i];
  }
  return os.str();
}

bool MonoidPresentation::has_generator(const std::string& g) const {
  return std::find(generators.begin(), generators.end(), g) != generators.end();
}

void MonoidPresentation::validate() const {
  for (const auto& [lhs, rhs] : relations)
    for (const Word* w : {&lhs, &rhs})
      for (const auto& g : *w)
        if (!has_generator(g))
          throw std::invalid_argument("relation uses unknown generator: " + g);
}

namespace {

struct ParsedSymbol {
  std::string name;
  std::vector<std::string> args;
};

ParsedSymbol parse_symbol(const std::string& s) {
  ParsedSymbol out;
  auto open = s.find('(');
  if (open == std::string::npos) {
    out.name = s;
    return out;
  }
  if (s.back() != ')')
    throw std::invalid_argument("malformed generator symbol: " + s);
  out.name = s.substr(0, open);
  std::string inner = s.substr(open + 1, s.size() - open - 2);
  std::string cur;
  for (char c : inner) {
    if (c == ',') {
      out.args.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  if (!cur.empty() || !inner.empty()) out.args.push_back(cur);
  return out;
}

long arg_index(const ParsedSymbol& p, std::size_t i) {
  if (i >= p.args.size())
    throw std::invalid_argument("missing argument in symbol: " + p.name);
  return std::stol(p.args[i]);
}

Rat arg_rat(const ParsedSymbol& p, std::size_t i) {
  if (i >= p.args.size())
    throw std::invalid_argument("missing argument in symbol: " + p.name);
  return parse_rat(p.args[i]);
}

void expect_args(const ParsedSymbol& p, std::size_t n,
                 const std::string& full) {
  if (p.args.size() != n)
    throw std::invalid_argument("wrong arity for generator: " + full);
}

Rat exact_sqrt(const Rat& v) {
  Int num = v.get_num(), den = v.get_den();
  if (mpz_perfect_square_p(num.get_mpz_t()) == 0 ||
      mpz_perfect_square_p(den.get_mpz_t()) == 0)
    throw std::domain_error("square root is irrational: " + rat_to_string(v));
  Int rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  Rat r(rn, rd);
  r.canonicalize();
  return r;
}

long ref_address(const Rat& v, const std::string& symbol) {
  if (!is_integer(v) || v < 0)
    throw std::runtime_error("bad indirect address " + rat_to_string(v) +
                             " in " + symbol);
  return static_cast<long>(v.get_num().get_si());
}

Int int_value(const Rat& v, const std::string& symbol) {
  if (!is_integer(v))
    throw std::runtime_error("non-integer operand in " + symbol);
  return v.get_num();
}

}  // namespace

std::optional<std::vector<Effect>> action_effects(const GeneratorAction& a,
                                                  const Memory& snap) {
  std::vector<Effect> out;
  switch (a.kind) {
    case GenKind::Identity:
      break;
    case GenKind::Const:
      out.emplace_back(a.dst, a.constant);
      break;
    case GenKind::Copy:
      out.emplace_back(a.dst, snap.get(a.src1));
      break;
    case GenKind::Add:
      out.emplace_back(a.dst, snap.get(a.src1) + snap.get(a.src2));
      break;
    case GenKind::Sub:
      out.emplace_back(a.dst, snap.get(a.src1) - snap.get(a.src2));
      break;
    case GenKind::Mul:
      out.emplace_back(a.dst, snap.get(a.src1) * snap.get(a.src2));
      break;
    case GenKind::EucliDiv: {
      Int b = int_value(snap.get(a.src1), a.symbol);
      Int k = int_value(snap.get(a.src2), a.symbol);
      out.emplace_back(a.dst, Rat(euclidean_div(b, k)));
      break;
    }
    case GenKind::RealDiv: {
      Rat d = snap.get(a.src2);
      if (d == 0) return std::nullopt;
      out.emplace_back(a.dst, snap.get(a.src1) / d);
      break;
    }
    case GenKind::Sqrt: {
      Rat v = snap.get(a.src1);
      if (v < 0) return std::nullopt;
      out.emplace_back(a.dst, exact_sqrt(v));
      break;
    }
    case GenKind::AddC:
      out.emplace_back(a.dst, a.constant + snap.get(a.src1));
      break;
    case GenKind::SubC:
      out.emplace_back(a.dst, a.constant - snap.get(a.src1));
      break;
    case GenKind::MulC:
      out.emplace_back(a.dst, a.constant * snap.get(a.src1));
      break;
    case GenKind::DivC: {
      Rat d = snap.get(a.src1);
      if (d == 0) return std::nullopt;
      out.emplace_back(a.dst, a.constant / d);
      break;
    }
    case GenKind::ReadRef: {
      long addr = ref_address(snap.get(a.src1), a.symbol);
      out.emplace_back(a.dst, snap.get({a.shared_block, addr}));
      break;
    }
    case GenKind::WriteRef: {
      long addr = ref_address(snap.get(a.src1), a.symbol);
      out.emplace_back(Coord{a.shared_block, addr}, snap.get(a.src2));
      break;
    }
    case GenKind::Tuple: {
      for (const auto& part : a.parts) {
        auto sub = action_effects(part, snap);
        if (!sub) return std::nullopt;
        for (auto& e : *sub) {
          bool shadowed = false;
          if (e.first.block == a.shared_block)
            for (const auto& prev : out)
              if (prev.first == e.first) {
                shadowed = true;  // earlier (smaller index) writer wins
                break;
              }
          if (!shadowed) out.push_back(std::move(e));
        }
      }
      break;
    }
  }
  return out;
}

GeneratorAction sram_action(const std::string& symbol, int private_block) {
  ParsedSymbol p = parse_symbol(symbol);
  GeneratorAction a;
  a.symbol = symbol;
  auto reg = [&](std::size_t i) {
    return Coord{private_block, arg_index(p, i)};
  };
  if (p.name == "skip" || p.name == "id") {
    expect_args(p, 0, symbol);
    a.kind = GenKind::Identity;
  } else if (p.name == "const") {
    expect_args(p, 2, symbol);
    a.kind = GenKind::Const;
    a.dst = reg(0);
    a.constant = arg_rat(p, 1);
    if (!is_integer(a.constant))
      throw std::invalid_argument("non-integer constant in " + symbol);
  } else if (p.name == "copy") {
    expect_args(p, 2, symbol);
    a.kind = GenKind::Copy;
    a.dst = reg(0);
    a.src1 = reg(1);
  } else if (p.name == "add" || p.name == "sub" || p.name == "mul" ||
             p.name == "euclidiv" || p.name == "euclidivide") {
    expect_args(p, 3, symbol);
    a.kind = p.name == "add"   ? GenKind::Add
             : p.name == "sub" ? GenKind::Sub
             : p.name == "mul" ? GenKind::Mul
                               : GenKind::EucliDiv;
    a.dst = reg(0);
    a.src1 = reg(1);
    a.src2 = reg(2);
  } else if (p.name == "readref") {
    expect_args(p, 2, symbol);
    a.kind = GenKind::ReadRef;
    a.dst = reg(0);
    a.src1 = reg(1);
  } else if (p.name == "writeref" || p.name == "copyref") {
    expect_args(p, 2, symbol);
    a.kind = GenKind::WriteRef;
    a.src1 = reg(0);  // pointer into the shared block
    a.src2 = reg(1);
    a.central = false;
  } else {
    throw std::invalid_argument("unknown SRAM generator: " + symbol);
  }
  return a;
}

GeneratorAction act_action(const std::string& symbol, int block) {
  ParsedSymbol p = parse_symbol(symbol);
  GeneratorAction a;
  a.symbol = symbol;
  auto reg = [&](std::size_t i) { return Coord{block, arg_index(p, i)}; };
  if (p.name == "id") {
    expect_args(p, 0, symbol);
    a.kind = GenKind::Identity;
  } else if (p.name == "const") {
    expect_args(p, 2, symbol);
    a.kind = GenKind::Const;
    a.dst = reg(0);
    a.constant = arg_rat(p, 1);
  } else if (p.name == "copy") {
    expect_args(p, 2, symbol);
    a.kind = GenKind::Copy;
    a.dst = reg(0);
    a.src1 = reg(1);
  } else if (p.name == "add" || p.name == "sub" || p.name == "mul" ||
             p.name == "div" || p.name == "realdiv") {
    expect_args(p, 3, symbol);
    a.kind = p.name == "add"   ? GenKind::Add
             : p.name == "sub" ? GenKind::Sub
             : p.name == "mul" ? GenKind::Mul
                               : GenKind::RealDiv;
    a.dst = reg(0);
    a.src1 = reg(1);
    a.src2 = reg(2);
  } else if (p.name == "addc" || p.name == "subc" || p.name == "mulc" ||
             p.name == "divc") {
    expect_args(p, 3, symbol);
    a.kind = p.name == "addc"   ? GenKind::AddC
             : p.name == "subc" ? GenKind::SubC
             : p.name == "mulc" ? GenKind::MulC
                                : GenKind::DivC;
    a.dst = reg(0);
    a.constant = arg_rat(p, 1);
    a.src1 = reg(2);
  } else if (p.name == "sqrt") {
    expect_args(p, 2, symbol);
    a.kind = GenKind::Sqrt;
    a.dst = reg(0);
    a.src1 = reg(1);
  } else {
    throw std::invalid_argument("unknown ACT generator: " + symbol);
  }
  return a;
}

GeneratorAction tuple_action(std::vector<GeneratorAction> parts) {
  GeneratorAction a;
  a.kind = GenKind::Tuple;
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) os << "|";
    os << parts[i].symbol;
  }
  os << ")";
  a.symbol = os.str();
  a.central = std::all_of(parts.begin(), parts.end(),
                          [](const GeneratorAction& p) { return p.central; });
  a.parts = std::move(parts);
  return a;
}

void Amc::validate() const {
  presentation.validate();
  for (const auto& g : presentation.generators)
    if (!actions.count(g))
      throw std::invalid_argument("generator without action: " + g);
  if (actions.size() != presentation.generators.size())
    throw std::invalid_argument("action table does not match generators");
}

Amc sram_amc(const std::vector<std::string>& symbols) {
  Amc amc;
  amc.space.blocks = {BlockKind::Integer, BlockKind::Integer};
  for (const auto& s : symbols) {
    amc.presentation.generators.push_back(s);
    amc.actions.emplace(s, sram_action(s));
  }
  amc.validate();
  return amc;
}

Amc act_amc(const std::vector<std::string>& symbols) {
  Amc amc;
  amc.space.blocks = {BlockKind::Real};
  for (const auto& s : symbols) {
    amc.presentation.generators.push_back(s);
    amc.actions.emplace(s, act_action(s));
  }
  amc.validate();
  return amc;
}

namespace {

Word tag_word(const std::string& tag, const Word& w) {
  Word out;
  out.reserve(w.size());
  for (const auto& g : w) out.push_back(tag + g);
  return out;
}

GeneratorAction remap_action(GeneratorAction a, const std::string& tag,
                             int private_offset) {
  auto remap = [&](Coord& c) {
    if (c.block >= 1) c.block += private_offset;
  };
  a.symbol = tag + a.symbol;
  remap(a.dst);
  remap(a.src1);
  remap(a.src2);
  for (auto& part : a.parts) {
    part = remap_action(std::move(part), "", private_offset);
  }
  return a;
}

}  // namespace

MonoidPresentation conflicted_sum(const MonoidPresentation& left,
                                  const MonoidPresentation& right,
                                  const ConflictRelation& conflict) {
  for (const auto& [g, h] : conflict.pairs)
    if (!left.has_generator(g) || !right.has_generator(h))
      throw std::invalid_argument("conflict pair (" + g + ", " + h +
                                  ") not drawn from the summands");
  MonoidPresentation out;
  for (const auto& g : left.generators) out.generators.push_back("1." + g);
  for (const auto& g : right.generators) out.generators.push_back("2." + g);
  for (const auto& [lhs, rhs] : left.relations)
    out.relations.emplace_back(tag_word("1.", lhs), tag_word("1.", rhs));
  for (const auto& [lhs, rhs] : right.relations)
    out.relations.emplace_back(tag_word("2.", lhs), tag_word("2.", rhs));
  for (const auto& g : left.generators)
    for (const auto& h : right.generators)
      if (!conflict.pairs.count({g, h}))
        out.relations.emplace_back(Word{"1." + g, "2." + h},
                                   Word{"2." + h, "1." + g});
  return out;
}

Amc crew(const Amc& left, const Amc& right) {
  if (left.space.blocks.empty() || right.space.blocks.empty() ||
      left.space.blocks[0] != right.space.blocks[0])
    throw std::invalid_argument("incompatible shared-block signatures");
  int left_priv = static_cast<int>(left.space.blocks.size()) - 1;

  ConflictRelation conflict;
  for (const auto& g : left.presentation.generators)
    for (const auto& h : right.presentation.generators)
      if (!left.actions.at(g).central && !right.actions.at(h).central)
        conflict.pairs.insert({g, h});

  Amc out;
  out.presentation =
      conflicted_sum(left.presentation, right.presentation, conflict);
  out.space.blocks = left.space.blocks;
  out.space.blocks.insert(out.space.blocks.end(),
                          right.space.blocks.begin() + 1,
                          right.space.blocks.end());
  for (const auto& [g, a] : left.actions)
    out.actions.emplace("1." + g, remap_action(a, "1.", 0));
  for (const auto& [g, a] : right.actions)
    out.actions.emplace("2." + g, remap_action(a, "2.", left_priv));
  out.validate();
  return out;
}

Amc crew_power(const Amc& amc, int p) {
  if (p < 1) throw std::invalid_argument("crew_power needs p >= 1");
  int priv = static_cast<int>(amc.space.blocks.size()) - 1;

  Amc out;
  out.space.blocks = amc.space.blocks;
  for (int q = 2; q <= p; ++q)
    out.space.blocks.insert(out.space.blocks.end(),
                            amc.space.blocks.begin() + 1,
                            amc.space.blocks.end());
  std::vector<std::string> tags;
  for (int q = 1; q <= p; ++q) tags.push_back(std::to_string(q) + ".");

  for (int q = 0; q < p; ++q) {
    for (const auto& g : amc.presentation.generators)
      out.presentation.generators.push_back(tags[q] + g);
    for (const auto& [lhs, rhs] : amc.presentation.relations)
      out.presentation.relations.emplace_back(tag_word(tags[q], lhs),
                                              tag_word(tags[q], rhs));
    for (const auto& [g, a] : amc.actions)
      out.actions.emplace(tags[q] + g, remap_action(a, tags[q], q * priv));
  }
  for (int q = 0; q < p; ++q)
    for (int r = q + 1; r < p; ++r)
      for (const auto& g : amc.presentation.generators)
        for (const auto& h : amc.presentation.generators) {
          if (!amc.actions.at(g).central && !amc.actions.at(h).central)
            continue;
          out.presentation.relations.emplace_back(
              Word{tags[q] + g, tags[r] + h}, Word{tags[r] + h, tags[q] + g});
        }
  out.validate();
  return out;
}

std::optional<Memory> apply_generator(const Amc& amc, const std::string& g,
                                      const Memory& m) {
  auto it = amc.actions.find(g);
  if (it == amc.actions.end())
    throw std::invalid_argument("unknown generator: " + g);
  auto effects = action_effects(it->second, m);
  if (!effects) return std::nullopt;
  Memory out = m;
  for (const auto& [c, v] : *effects) {
    if (c.block >= 0 &&
        static_cast<std::size_t>(c.block) < amc.space.blocks.size() &&
        amc.space.blocks[static_cast<std::size_t>(c.block)] ==
            BlockKind::Integer &&
        !is_integer(v))
      throw std::runtime_error("non-integer write to integer block by " + g);
    out.set(c, v);
  }
  return out;
}

std::optional<Memory> word_apply(const Amc& amc, const Word& w,
                                 const Memory& m) {
  Memory cur = m;
  for (const auto& g : w) {
    auto next = apply_generator(amc, g, cur);
    if (!next) return std::nullopt;
    cur = std::move(*next);
  }
  return cur;
}

Word normalize_word(const MonoidPresentation& pres, Word w) {
  std::set<std::pair<std::string, std::string>> commuting;
  std::set<std::string> units;
  for (const auto& [lhs, rhs] : pres.relations) {
    if (lhs.size() == 2 && rhs.size() == 2 && lhs[0] == rhs[1] &&
        lhs[1] == rhs[0]) {
      commuting.insert({lhs[0], lhs[1]});
      commuting.insert({lhs[1], lhs[0]});
    } else if (lhs.size() == 1 && rhs.empty()) {
      units.insert(lhs[0]);
    } else if (rhs.size() == 1 && lhs.empty()) {
      units.insert(rhs[0]);
    } else if (lhs == rhs) {
      continue;
    } else {
      throw std::invalid_argument(
          "relation is neither a commutation nor a unit elimination: " +
          word_to_string(lhs) + " = " + word_to_string(rhs));
    }
  }
  Word out;
  for (auto& g : w)
    if (!units.count(g)) out.push_back(std::move(g));
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < out.size(); ++i)
      if (out[i + 1] < out[i] && commuting.count({out[i], out[i + 1]})) {
        std::swap(out[i], out[i + 1]);
        changed = true;
      }
  }
  return out;
}

}  // namespace gmx
