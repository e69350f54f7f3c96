#ifndef GMX_REGION_HPP_
#define GMX_REGION_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gmx/config.hpp"
#include "gmx/poly.hpp"

namespace gmx {

/// Three-valued answer for semidecidable questions.
enum class Tri { False, True, Unknown };

/// Allowed-sign bitmask for a real quantity.
namespace signmask {
constexpr std::uint8_t kNeg = 1;
constexpr std::uint8_t kZero = 2;
constexpr std::uint8_t kPos = 4;
constexpr std::uint8_t kAll = 7;
std::uint8_t from_rel(Rel rel);
std::optional<Rel> to_rel(std::uint8_t mask);
}  // namespace signmask

/// Equality / disequality between two coordinates; used by compiled PRAM
/// graphings to split write-conflict cases into edge sources.
struct CoordCmpAtom {
  Coord a;
  Coord b;
  bool equal = true;
  auto operator<=>(const CoordCmpAtom&) const = default;
};

/// Sign condition on a polynomial in the listed coordinates (variable i of
/// the polynomial reads vars[i]). Single-coordinate sign conditions are kept
/// separately as masks.
struct PolyAtom {
  std::vector<Coord> vars;
  MultiPoly poly;
  std::uint8_t mask = signmask::kAll;  // allowed signs of poly's value
  bool operator==(const PolyAtom&) const = default;
};

/// A conjunction of sign conditions: per-coordinate sign masks, coordinate
/// comparisons, and polynomial sign conditions. Empty conjunction = Whole.
class Region {
 public:
  Region() = default;

  static Region whole() { return Region(); }
  static Region sign_of(const Coord& c, Rel rel);
  static Region coord_eq(const Coord& a, const Coord& b);
  static Region coord_ne(const Coord& a, const Coord& b);
  static Region poly_sign(std::vector<Coord> vars, MultiPoly p, Rel rel);

  bool is_whole() const;
  Region intersect(const Region& o) const;
  bool contains(const Memory& m) const;

  /// Proven emptiness. Exact for: per-coordinate sign masks, coordinate
  /// comparisons, identical-polynomial mask clashes, and fully univariate
  /// atom sets (root isolation). Otherwise falls back to rational sampling:
  /// a satisfying sample proves nonempty, exhaustion reports Unknown.
  Tri emptiness() const;
  /// true iff emptiness() proves empty (unknown => keep).
  bool is_empty() const { return emptiness() == Tri::True; }

  const std::map<Coord, std::uint8_t>& coord_masks() const {
    return coord_masks_;
  }
  const std::vector<CoordCmpAtom>& cmp_atoms() const { return cmp_atoms_; }
  const std::vector<PolyAtom>& poly_atoms() const { return poly_atoms_; }

  bool operator==(const Region& o) const = default;

  std::string to_string() const;

 private:
  std::map<Coord, std::uint8_t> coord_masks_;  // absent => all signs allowed
  std::vector<CoordCmpAtom> cmp_atoms_;
  std::vector<PolyAtom> poly_atoms_;
};

/// Atom key: either a coordinate or a polynomial constraint, used for
/// sign-assignment enumeration when checking unions of regions.
struct AtomKey {
  // kind 0: coordinate; kind 1: polynomial atom (vars+poly).
  int kind = 0;
  Coord coord;
  std::vector<Coord> vars;
  MultiPoly poly;
  bool operator==(const AtomKey&) const = default;
};

std::vector<AtomKey> collect_atom_keys(const std::vector<Region>& regions);

/// Evaluates the region as a conjunction over a sign assignment to the keys
/// (CoordCmpAtoms make the result Unknown unless decided by the assignment
/// being on the same coordinate).
Tri eval_on_assignment(const Region& r, const std::vector<AtomKey>& keys,
                       const std::vector<int>& signs);

/// Checks that `parts` are pairwise disjoint and their union equals `target`
/// (symmetric difference empty), by enumerating sign assignments over the
/// involved atom keys. Exact when regions carry no CoordCmpAtoms and the
/// atoms are algebraically independent; returns Unknown otherwise.
Tri partition_covers(const std::vector<Region>& parts, const Region& target);

}  // namespace gmx

#endif  // GMX_REGION_HPP_
