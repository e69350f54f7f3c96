#include "gmx/region.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace gmx {

namespace signmask {

std::uint8_t from_rel(Rel rel) {
  switch (rel) {
    case Rel::Lt: return kNeg;
    case Rel::Le: return kNeg | kZero;
    case Rel::Eq: return kZero;
    case Rel::Ne: return kNeg | kPos;
    case Rel::Ge: return kZero | kPos;
    case Rel::Gt: return kPos;
  }
  return kAll;
}

std::optional<Rel> to_rel(std::uint8_t mask) {
  switch (mask) {
    case kNeg: return Rel::Lt;
    case kNeg | kZero: return Rel::Le;
    case kZero: return Rel::Eq;
    case kNeg | kPos: return Rel::Ne;
    case kZero | kPos: return Rel::Ge;
    case kPos: return Rel::Gt;
    default: return std::nullopt;  // kAll or empty
  }
}

}  // namespace signmask

namespace {

std::uint8_t sign_bit(int s) {
  if (s < 0) return signmask::kNeg;
  if (s == 0) return signmask::kZero;
  return signmask::kPos;
}

}  // namespace

Region Region::sign_of(const Coord& c, Rel rel) {
  Region r;
  r.coord_masks_[c] = signmask::from_rel(rel);
  return r;
}

Region Region::coord_eq(const Coord& a, const Coord& b) {
  Region r;
  if (a != b) r.cmp_atoms_.push_back({std::min(a, b), std::max(a, b), true});
  return r;
}

Region Region::coord_ne(const Coord& a, const Coord& b) {
  Region r;
  r.cmp_atoms_.push_back({std::min(a, b), std::max(a, b), false});
  return r;
}

Region Region::poly_sign(std::vector<Coord> vars, MultiPoly p, Rel rel) {
  Region r;
  // A polynomial in a single listed coordinate of degree 1 with no constant
  // term is just a sign condition on that coordinate.
  auto sole = p.sole_variable();
  if (sole && p.total_degree() == 1 && p.terms().size() == 1 &&
      *sole < vars.size()) {
    Rat c = p.terms().begin()->second;
    std::uint8_t mask = signmask::from_rel(rel);
    if (c < 0) {  // flip sign condition
      std::uint8_t flipped = 0;
      if (mask & signmask::kNeg) flipped |= signmask::kPos;
      if (mask & signmask::kZero) flipped |= signmask::kZero;
      if (mask & signmask::kPos) flipped |= signmask::kNeg;
      mask = flipped;
    }
    r.coord_masks_[vars[*sole]] = mask;
    return r;
  }
  PolyAtom atom;
  atom.vars = std::move(vars);
  atom.poly = std::move(p);
  atom.mask = signmask::from_rel(rel);
  r.poly_atoms_.push_back(std::move(atom));
  return r;
}

bool Region::is_whole() const {
  if (!cmp_atoms_.empty() || !poly_atoms_.empty()) return false;
  for (const auto& [c, m] : coord_masks_)
    if (m != signmask::kAll) return false;
  return true;
}

Region Region::intersect(const Region& o) const {
  Region r = *this;
  for (const auto& [c, m] : o.coord_masks_) {
    auto it = r.coord_masks_.find(c);
    if (it == r.coord_masks_.end())
      r.coord_masks_[c] = m;
    else
      it->second &= m;
  }
  for (const auto& a : o.cmp_atoms_)
    if (std::find(r.cmp_atoms_.begin(), r.cmp_atoms_.end(), a) ==
        r.cmp_atoms_.end())
      r.cmp_atoms_.push_back(a);
  for (const auto& a : o.poly_atoms_) {
    bool merged = false;
    for (auto& mine : r.poly_atoms_)
      if (mine.vars == a.vars && mine.poly == a.poly) {
        mine.mask &= a.mask;
        merged = true;
        break;
      }
    if (!merged) r.poly_atoms_.push_back(a);
  }
  return r;
}

bool Region::contains(const Memory& m) const {
  for (const auto& [c, mask] : coord_masks_)
    if (!(sign_bit(sign(m.get(c))) & mask)) return false;
  for (const auto& a : cmp_atoms_) {
    bool eq = m.get(a.a) == m.get(a.b);
    if (eq != a.equal) return false;
  }
  for (const auto& a : poly_atoms_) {
    std::vector<Rat> point;
    point.reserve(a.vars.size());
    for (const auto& c : a.vars) point.push_back(m.get(c));
    if (!(sign_bit(a.poly.sign_at(point)) & a.mask)) return false;
  }
  return true;
}

namespace {

// Minimal union-find over indices.
struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

struct ComponentView {
  std::set<Coord> coords;
  std::map<Coord, std::uint8_t> masks;
  std::vector<CoordCmpAtom> cmps;
  std::vector<PolyAtom> polys;
};

}  // namespace

Tri Region::emptiness() const {
  // Normalized poly atoms: constants decided immediately.
  std::vector<PolyAtom> polys;
  for (const auto& a : poly_atoms_) {
    if (a.mask == 0) return Tri::True;
    if (a.poly.sole_variable() == std::nullopt &&
        a.poly.total_degree() == 0) {
      Rat c = a.poly.is_zero() ? Rat(0) : a.poly.terms().begin()->second;
      if (!(sign_bit(sign(c)) & a.mask)) return Tri::True;
      continue;  // trivially satisfied
    }
    if (a.mask == signmask::kAll) continue;
    polys.push_back(a);
  }

  for (const auto& [c, m] : coord_masks_) {
    (void)c;
    if (m == 0) return Tri::True;
  }

  // Union-find over coordinates joined by equality atoms.
  std::vector<Coord> coords;
  auto coord_id = [&](const Coord& c) {
    auto it = std::find(coords.begin(), coords.end(), c);
    if (it != coords.end())
      return static_cast<std::size_t>(it - coords.begin());
    coords.push_back(c);
    return coords.size() - 1;
  };
  for (const auto& [c, m] : coord_masks_) {
    (void)m;
    coord_id(c);
  }
  for (const auto& a : cmp_atoms_) {
    coord_id(a.a);
    coord_id(a.b);
  }
  for (const auto& a : polys)
    for (const auto& c : a.vars) coord_id(c);

  UnionFind uf(coords.size());
  for (const auto& a : cmp_atoms_)
    if (a.equal) uf.unite(coord_id(a.a), coord_id(a.b));

  std::map<std::size_t, std::uint8_t> class_mask;
  for (std::size_t i = 0; i < coords.size(); ++i) class_mask[uf.find(i)] = signmask::kAll;
  for (const auto& [c, m] : coord_masks_) class_mask[uf.find(coord_id(c))] &= m;
  for (const auto& [root, m] : class_mask) {
    (void)root;
    if (m == 0) return Tri::True;
  }
  for (const auto& a : cmp_atoms_) {
    if (a.equal) continue;
    std::size_t ra = uf.find(coord_id(a.a)), rb = uf.find(coord_id(a.b));
    if (ra == rb) return Tri::True;
    if (class_mask[ra] == signmask::kZero && class_mask[rb] == signmask::kZero)
      return Tri::True;
  }

  // Identical polynomials with clashing masks.
  for (std::size_t i = 0; i < polys.size(); ++i)
    for (std::size_t j = i + 1; j < polys.size(); ++j)
      if (polys[i].vars == polys[j].vars && polys[i].poly == polys[j].poly &&
          (polys[i].mask & polys[j].mask) == 0)
        return Tri::True;

  if (polys.empty()) return Tri::False;  // masks + cmps alone are satisfiable

  // Split into connected components of coordinate sharing; a conjunction is
  // empty iff some component is.
  UnionFind comp(coords.size());
  for (const auto& a : polys)
    for (std::size_t i = 1; i < a.vars.size(); ++i)
      comp.unite(coord_id(a.vars[0]), coord_id(a.vars[i]));
  for (const auto& a : cmp_atoms_) comp.unite(coord_id(a.a), coord_id(a.b));

  std::map<std::size_t, ComponentView> views;
  for (std::size_t i = 0; i < coords.size(); ++i)
    views[comp.find(i)].coords.insert(coords[i]);
  for (const auto& [c, m] : coord_masks_)
    views[comp.find(coord_id(c))].masks[c] = m;
  for (const auto& a : cmp_atoms_)
    views[comp.find(coord_id(a.a))].cmps.push_back(a);
  for (const auto& a : polys)
    views[comp.find(coord_id(a.vars.empty() ? Coord{} : a.vars[0]))]
        .polys.push_back(a);

  bool unknown = false;
  for (const auto& [root, view] : views) {
    (void)root;
    if (view.polys.empty()) continue;  // already checked satisfiable above
    if (view.coords.size() == 1 && view.cmps.empty()) {
      // Exact univariate tier.
      const Coord& c = *view.coords.begin();
      std::vector<std::pair<UniPoly, Rel>> constraints;
      bool ok = true;
      for (const auto& a : view.polys) {
        auto rel = signmask::to_rel(a.mask);
        auto sole = a.poly.sole_variable();
        std::optional<UniPoly> up =
            sole ? a.poly.as_univariate(*sole) : std::nullopt;
        if (!rel || !up) {
          ok = false;
          break;
        }
        constraints.emplace_back(*up, *rel);
      }
      auto mit = view.masks.find(c);
      if (ok && mit != view.masks.end() && mit->second != signmask::kAll) {
        auto rel = signmask::to_rel(mit->second);
        if (!rel)
          ok = false;
        else
          constraints.emplace_back(UniPoly::variable(), *rel);
      }
      if (ok) {
        if (count_interval_components(constraints) == 0) return Tri::True;
        continue;  // nonempty component
      }
    }
    // Sampling fallback: a hit proves the component nonempty.
    std::mt19937 rng(0xB10B);
    std::uniform_int_distribution<long> num(-12, 12);
    std::uniform_int_distribution<long> den(1, 4);
    std::vector<Coord> cs(view.coords.begin(), view.coords.end());
    bool hit = false;
    for (int trial = 0; trial < 4000 && !hit; ++trial) {
      Memory m;
      for (const auto& c : cs) m.set(c, make_rat(num(rng), den(rng)));
      for (const auto& a : view.cmps)
        if (a.equal) m.set(a.b, m.get(a.a));
      Region sub;
      sub.coord_masks_ = std::map<Coord, std::uint8_t>(view.masks.begin(),
                                                       view.masks.end());
      sub.cmp_atoms_ = view.cmps;
      sub.poly_atoms_ = view.polys;
      hit = sub.contains(m);
    }
    if (!hit) unknown = true;
  }
  return unknown ? Tri::Unknown : Tri::False;
}

std::string Region::to_string() const {
  if (is_whole()) return "whole";
  std::ostringstream os;
  bool first = true;
  auto sep = [&] {
    if (!first) os << " & ";
    first = false;
  };
  for (const auto& [c, m] : coord_masks_) {
    sep();
    auto rel = signmask::to_rel(m);
    os << "x[" << coord_to_string(c) << "] "
       << (rel ? rel_to_string(*rel) : (m == signmask::kAll ? "any" : "none"))
       << " 0";
  }
  for (const auto& a : cmp_atoms_) {
    sep();
    os << "x[" << coord_to_string(a.a) << "] " << (a.equal ? "=" : "!=")
       << " x[" << coord_to_string(a.b) << "]";
  }
  for (const auto& a : poly_atoms_) {
    sep();
    auto rel = signmask::to_rel(a.mask);
    os << a.poly.to_string() << " " << (rel ? rel_to_string(*rel) : "?")
       << " 0";
  }
  return os.str();
}

std::vector<AtomKey> collect_atom_keys(const std::vector<Region>& regions) {
  std::vector<AtomKey> keys;
  auto add = [&](const AtomKey& k) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end())
      keys.push_back(k);
  };
  for (const auto& r : regions) {
    for (const auto& [c, m] : r.coord_masks()) {
      (void)m;
      AtomKey k;
      k.kind = 0;
      k.coord = c;
      add(k);
    }
    for (const auto& a : r.poly_atoms()) {
      AtomKey k;
      k.kind = 1;
      k.vars = a.vars;
      k.poly = a.poly;
      add(k);
    }
  }
  return keys;
}

Tri eval_on_assignment(const Region& r, const std::vector<AtomKey>& keys,
                       const std::vector<int>& signs) {
  if (!r.cmp_atoms().empty()) return Tri::Unknown;
  for (const auto& [c, m] : r.coord_masks()) {
    AtomKey k;
    k.kind = 0;
    k.coord = c;
    auto it = std::find(keys.begin(), keys.end(), k);
    if (it == keys.end()) return Tri::Unknown;
    int s = signs[static_cast<std::size_t>(it - keys.begin())];
    if (!(sign_bit(s) & m)) return Tri::False;
  }
  for (const auto& a : r.poly_atoms()) {
    AtomKey k;
    k.kind = 1;
    k.vars = a.vars;
    k.poly = a.poly;
    auto it = std::find(keys.begin(), keys.end(), k);
    if (it == keys.end()) return Tri::Unknown;
    int s = signs[static_cast<std::size_t>(it - keys.begin())];
    if (!(sign_bit(s) & a.mask)) return Tri::False;
  }
  return Tri::True;
}

namespace {

/// True if the sign assignment is achievable by some point; exact when all
/// keys are univariate constraints on one shared coordinate, permissive
/// otherwise.
bool assignment_realizable(const std::vector<AtomKey>& keys,
                           const std::vector<int>& signs) {
  std::optional<Coord> common;
  bool single_coord = true;
  for (const auto& k : keys) {
    std::optional<Coord> c;
    if (k.kind == 0) {
      c = k.coord;
    } else {
      auto sole = k.poly.sole_variable();
      if (sole && *sole < k.vars.size()) c = k.vars[*sole];
    }
    if (!c) {
      single_coord = false;
      break;
    }
    if (common && *common != *c) {
      single_coord = false;
      break;
    }
    common = c;
  }
  if (!single_coord || !common) return true;
  std::vector<std::pair<UniPoly, Rel>> constraints;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    Rel rel = signs[i] < 0 ? Rel::Lt : (signs[i] == 0 ? Rel::Eq : Rel::Gt);
    if (keys[i].kind == 0) {
      constraints.emplace_back(UniPoly::variable(), rel);
    } else {
      auto sole = keys[i].poly.sole_variable();
      auto up = keys[i].poly.as_univariate(sole ? *sole : 0);
      if (!up) return true;
      constraints.emplace_back(*up, rel);
    }
  }
  return count_interval_components(constraints) > 0;
}

}  // namespace

Tri partition_covers(const std::vector<Region>& parts, const Region& target) {
  std::vector<Region> all = parts;
  all.push_back(target);
  for (const auto& r : all)
    if (!r.cmp_atoms().empty()) return Tri::Unknown;
  std::vector<AtomKey> keys = collect_atom_keys(all);
  if (keys.size() > 12) return Tri::Unknown;

  std::vector<int> signs(keys.size(), -1);
  std::size_t total = 1;
  for (std::size_t i = 0; i < keys.size(); ++i) total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (std::size_t i = 0; i < keys.size(); ++i) {
      signs[i] = static_cast<int>(c % 3) - 1;
      c /= 3;
    }
    if (!assignment_realizable(keys, signs)) continue;
    Tri t = eval_on_assignment(target, keys, signs);
    if (t == Tri::Unknown) return Tri::Unknown;
    int count = 0;
    for (const auto& p : parts) {
      Tri pt = eval_on_assignment(p, keys, signs);
      if (pt == Tri::Unknown) return Tri::Unknown;
      if (pt == Tri::True) ++count;
    }
    int want = (t == Tri::True) ? 1 : 0;
    if (count != want) return Tri::False;
  }
  return Tri::True;
}

}  // namespace gmx
