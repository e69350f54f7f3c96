#ifndef GMX_FAN_HPP_
#define GMX_FAN_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gmx/benor.hpp"

namespace gmx {

/// Directed edge with affine capacity a*lambda + b.
struct ParamEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  Rat a;
  Rat b;

  Rat capacity_at(const Rat& lambda) const { return a * lambda + b; }
};

struct ParamNetwork {
  std::vector<std::string> nodes;
  std::vector<ParamEdge> edges;
  std::size_t source = 0;
  std::size_t sink = 0;
  Rat lo;
  Rat hi;  // lambda ranges over [lo, hi]

  /// Affine capacities are nonnegative on [lo, hi] iff at both endpoints.
  void validate() const;
};

struct FlowResult {
  Rat value;
  std::vector<bool> cut;  // source side of a min cut (residual reachability)
};

/// Exact max flow at a fixed lambda, augmenting-path method; the returned
/// min cut certifies optimality. Rejects negative capacities.
FlowResult maxflow_cut(const ParamNetwork& net, const Rat& lambda);
Rat maxflow(const ParamNetwork& net, const Rat& lambda);

/// Capacity of a cut as an affine function of lambda: (slope, intercept).
std::pair<Rat, Rat> cut_line(const ParamNetwork& net,
                             const std::vector<bool>& cut);

struct PLPoint {
  Rat x;
  Rat y;
  bool operator==(const PLPoint&) const = default;
};

/// Piecewise-linear function given by its node list, linear in between.
struct PLProfile {
  std::vector<PLPoint> points;  // x strictly increasing; >= 2 entries

  Rat eval(const Rat& x) const;
};

/// Exact breakpoint discovery for lambda -> maxflow. A chord test detects
/// linear pieces; otherwise the min-cut lines at the endpoints intersect at
/// the candidate breakpoint and the interval splits there.
PLProfile parametric_profile(const ParamNetwork& net, int depth_cap = 64);

struct RhoFan {
  std::vector<PLPoint> points;  // endpoints plus interior breakpoints
  Rat lo;
  Rat hi;
  int rho = 0;             // interior breakpoint count
  std::uint64_t beta = 1;  // max bitsize over breakpoint coordinates
  bool convex = false;     // slopes nondecreasing
  bool concave = false;    // slopes nonincreasing

  Rat eval(const Rat& x) const;
};

RhoFan make_fan(const PLProfile& profile);

struct Vec3 {
  Rat x;
  Rat y;
  Rat z;
  bool operator==(const Vec3&) const = default;
};

/// Central projection onto the affine plane z = 1; requires z > 0.
Vec3 project(const Vec3& p);

/// (x,y,z) lies under the fan: z > 0, x/z in [lo,hi], y/z <= fan(x/z).
bool pdec_member(const RhoFan& fan, const Vec3& p);

/// Per fan segment [x_i, x_{i+1}], the points
/// x_i^k = ((10 dS - k) x_i + k x_{i+1}) / (10 dS) for 0 < k < 10 dS,
/// lifted to z = 1 on the fan graph.
std::vector<Vec3> sample_points(const RhoFan& fan, int dS);

/// Algebraic surface p(x,y,z) = 0 with variables x=0, y=1, z=2.
struct Surface {
  MultiPoly poly;

  int degree() const { return poly.total_degree(); }
};

/// Compact slab mu <= z <= 2 mu with |x|,|y| <= mu_xy * z.
struct CompactK {
  Rat mu;
  Rat mu_xy;
};

struct SepResult {
  bool separated = false;
  std::optional<std::pair<Vec3, Vec3>> witness;  // same S-class, split by fan
};

/// The sign partition of S refines the fan partition on the integer points
/// of K. Enumeration is budget-checked.
SepResult separates(const std::vector<Surface>& S, const RhoFan& fan,
                    const CompactK& K, long budget = 2000000);

/// Number of sign-changing roots of c''' interior to (lo, hi): the extrema
/// of c''.
int volatility(const UniPoly& c, const Rat& lo, const Rat& hi);

/// Symbolic Collins ingredients over variables x,y,z: per-surface silhouette
/// systems, pairwise intersections, dividing planes z = mu(1 + n/(6 delta))
/// for n in 1..6 delta - 1 with delta the max surface degree, and the
/// K-boundary planes. Nothing is solved.
std::vector<PolySystem> collins_systems(const std::vector<Surface>& S,
                                        const CompactK& K);

struct CertificateQuantities {
  Int equations;      // (2p)^{4k}
  Int degree;         // 2^{4k}
  Int rho_threshold;  // 2^{k+1} p^k
  std::optional<Int> measured_equations;
  std::optional<Int> measured_degree;
  bool ok = true;  // measured <= stated when measured
};

CertificateQuantities certificate_quantities(
    int p, int k, const PolySystem* measured = nullptr);

}  // namespace gmx

#endif  // GMX_FAN_HPP_
