#ifndef GMX_POLY_HPP_
#define GMX_POLY_HPP_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gmx/rat.hpp"

namespace gmx {

/// Dense univariate polynomial over Rat. Coefficient i multiplies x^i; the
/// leading coefficient is nonzero unless the polynomial is zero (empty list).
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<Rat> coeffs) : coeffs_(std::move(coeffs)) {
    trim();
  }
  static UniPoly constant(const Rat& c);
  static UniPoly monomial(const Rat& c, std::size_t degree);
  /// x
  static UniPoly variable();

  bool is_zero() const { return coeffs_.empty(); }
  /// Degree; -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Rat>& coeffs() const { return coeffs_; }
  Rat coeff(std::size_t i) const {
    return i < coeffs_.size() ? coeffs_[i] : Rat(0);
  }
  Rat leading() const;

  Rat eval(const Rat& x) const;
  int sign_at(const Rat& x) const { return sign(eval(x)); }

  UniPoly operator+(const UniPoly& o) const;
  UniPoly operator-(const UniPoly& o) const;
  UniPoly operator*(const UniPoly& o) const;
  UniPoly operator-() const;
  bool operator==(const UniPoly& o) const { return coeffs_ == o.coeffs_; }

  UniPoly scale(const Rat& c) const;
  /// Formal derivative of the given order.
  UniPoly derivative(unsigned order = 1) const;
  /// Polynomial remainder (degree(result) < degree(divisor)).
  UniPoly rem(const UniPoly& divisor) const;
  /// Removes repeated roots: p / gcd(p, p').
  UniPoly squarefree_part() const;

  std::string to_string(const std::string& var = "x") const;

 private:
  void trim();
  std::vector<Rat> coeffs_;
};

/// Closed rational interval [lo, hi]; lo == hi encodes an exact root.
struct RootInterval {
  Rat lo;
  Rat hi;
  bool is_point() const { return lo == hi; }
};

/// Sturm sequence of p (squarefree part taken internally).
std::vector<UniPoly> sturm_sequence(const UniPoly& p);

/// Number of distinct real roots of p in (a, b], by Sturm sign variations.
int sturm_count(const std::vector<UniPoly>& seq, const Rat& a, const Rat& b);

/// A bound B such that all real roots of p lie in [-B, B].
Rat root_bound(const UniPoly& p);

/// Isolating intervals for the distinct real roots of p, restricted to
/// [interval] when given, sorted. Each interval contains exactly one root;
/// exact rational roots come back as point intervals. Rejects p == 0.
std::vector<RootInterval> isolate_roots(
    const UniPoly& p, std::optional<std::pair<Rat, Rat>> interval = {});

/// Bisects the isolating interval until hi - lo <= width (point intervals
/// are returned unchanged).
RootInterval refine_root(const UniPoly& p, RootInterval iv, const Rat& width);

/// Sign relation of a polynomial constraint "p rel 0".
enum class Rel { Lt, Le, Eq, Ne, Ge, Gt };

bool rel_holds(int sgn, Rel rel);
std::string rel_to_string(Rel rel);
Rel parse_rel(const std::string& s);

/// Number of connected components (maximal intervals) of
/// { x in domain : p rel 0 for every constraint }, computed from a sign
/// chart over the isolated roots of all constraint polynomials.
int count_interval_components(
    const std::vector<std::pair<UniPoly, Rel>>& constraints,
    std::optional<std::pair<Rat, Rat>> domain = {});

/// Sparse multivariate polynomial over Rat. Keys are exponent vectors
/// (trailing zeros trimmed); no zero coefficients stored.
class MultiPoly {
 public:
  using Monomial = std::vector<unsigned>;

  MultiPoly() = default;
  static MultiPoly constant(const Rat& c);
  /// x_index (0-based)
  static MultiPoly variable(std::size_t index);

  bool is_zero() const { return terms_.empty(); }
  int total_degree() const;
  std::size_t num_vars() const;
  const std::map<Monomial, Rat>& terms() const { return terms_; }
  void set_term(const Monomial& m, const Rat& c);

  MultiPoly operator+(const MultiPoly& o) const;
  MultiPoly operator-(const MultiPoly& o) const;
  MultiPoly operator*(const MultiPoly& o) const;
  MultiPoly operator-() const;
  bool operator==(const MultiPoly& o) const { return terms_ == o.terms_; }

  MultiPoly scale(const Rat& c) const;
  MultiPoly partial_derivative(std::size_t var) const;
  /// Substitutes replacement for variable var.
  MultiPoly substitute(std::size_t var, const MultiPoly& replacement) const;

  Rat eval(const std::vector<Rat>& point) const;
  int sign_at(const std::vector<Rat>& point) const { return sign(eval(point)); }

  /// Conversion when at most the single variable `var` occurs.
  std::optional<UniPoly> as_univariate(std::size_t var) const;
  /// The single variable used, if any (constants report nullopt as well).
  std::optional<std::size_t> sole_variable() const;

  std::string to_string(
      const std::vector<std::string>& var_names = {}) const;

 private:
  std::map<Monomial, Rat> terms_;
};

}  // namespace gmx

#endif  // GMX_POLY_HPP_
