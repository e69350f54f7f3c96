#include "gmx/fan.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace gmx {

void ParamNetwork::validate() const {
  if (nodes.empty()) throw std::invalid_argument("network has no nodes");
  if (source >= nodes.size() || sink >= nodes.size())
    throw std::invalid_argument("source or sink out of range");
  if (lo > hi) throw std::invalid_argument("empty lambda interval");
  for (const auto& e : edges) {
    if (e.from >= nodes.size() || e.to >= nodes.size())
      throw std::invalid_argument("edge endpoint out of range");
    if (sign(e.capacity_at(lo)) < 0 || sign(e.capacity_at(hi)) < 0)
      throw std::invalid_argument("capacity negative on the interval");
  }
}

namespace {

struct Arc {
  std::size_t to;
  Rat cap;
  std::size_t rev;
};

}  // namespace

FlowResult maxflow_cut(const ParamNetwork& net, const Rat& lambda) {
  std::size_t n = net.nodes.size();
  std::vector<std::vector<Arc>> adj(n);
  for (const auto& e : net.edges) {
    Rat c = e.capacity_at(lambda);
    if (sign(c) < 0)
      throw std::invalid_argument("negative capacity at lambda");
    adj[e.from].push_back({e.to, c, adj[e.to].size()});
    adj[e.to].push_back({e.from, Rat(0), adj[e.from].size() - 1});
  }

  Rat total(0);
  for (;;) {
    // shortest augmenting path
    std::vector<std::pair<std::size_t, std::size_t>> parent(
        n, {SIZE_MAX, SIZE_MAX});
    std::vector<bool> seen(n, false);
    std::queue<std::size_t> q;
    q.push(net.source);
    seen[net.source] = true;
    while (!q.empty() && !seen[net.sink]) {
      std::size_t u = q.front();
      q.pop();
      for (std::size_t i = 0; i < adj[u].size(); ++i) {
        const Arc& a = adj[u][i];
        if (seen[a.to] || sign(a.cap) <= 0) continue;
        seen[a.to] = true;
        parent[a.to] = {u, i};
        q.push(a.to);
      }
    }
    if (!seen[net.sink]) break;

    Rat aug;
    bool first = true;
    for (std::size_t v = net.sink; v != net.source;) {
      auto [u, i] = parent[v];
      if (first || adj[u][i].cap < aug) aug = adj[u][i].cap;
      first = false;
      v = u;
    }
    for (std::size_t v = net.sink; v != net.source;) {
      auto [u, i] = parent[v];
      adj[u][i].cap -= aug;
      adj[adj[u][i].to][adj[u][i].rev].cap += aug;
      v = u;
    }
    total += aug;
  }

  // residual reachability gives a min cut
  std::vector<bool> cut(n, false);
  std::queue<std::size_t> q;
  q.push(net.source);
  cut[net.source] = true;
  while (!q.empty()) {
    std::size_t u = q.front();
    q.pop();
    for (const Arc& a : adj[u])
      if (!cut[a.to] && sign(a.cap) > 0) {
        cut[a.to] = true;
        q.push(a.to);
      }
  }

  Rat cut_cap(0);
  for (const auto& e : net.edges)
    if (cut[e.from] && !cut[e.to]) cut_cap += e.capacity_at(lambda);
  if (cut_cap != total)
    throw std::logic_error("maxflow/min-cut certificate mismatch");
  return {total, cut};
}

Rat maxflow(const ParamNetwork& net, const Rat& lambda) {
  return maxflow_cut(net, lambda).value;
}

std::pair<Rat, Rat> cut_line(const ParamNetwork& net,
                             const std::vector<bool>& cut) {
  Rat a(0), b(0);
  for (const auto& e : net.edges)
    if (cut[e.from] && !cut[e.to]) {
      a += e.a;
      b += e.b;
    }
  return {a, b};
}

namespace {

Rat eval_piecewise(const std::vector<PLPoint>& pts, const Rat& x) {
  if (pts.empty()) throw std::invalid_argument("empty profile");
  if (x < pts.front().x || x > pts.back().x)
    throw std::invalid_argument("evaluation outside the interval");
  if (pts.size() == 1) return pts.front().y;
  std::size_t i = 1;
  while (i + 1 < pts.size() && x > pts[i].x) ++i;
  const PLPoint& l = pts[i - 1];
  const PLPoint& r = pts[i];
  return l.y + (r.y - l.y) * (x - l.x) / (r.x - l.x);
}

void profile_rec(const ParamNetwork& net, const Rat& a, const FlowResult& fa,
                 const Rat& b, const FlowResult& fb, int depth,
                 std::vector<Rat>& breaks) {
  if (depth < 0)
    throw std::runtime_error("parametric profile: depth cap exceeded in [" +
                             rat_to_string(a) + ", " + rat_to_string(b) + "]");
  Rat mid = (a + b) / 2;
  Rat fm = maxflow(net, mid);
  if (fm == (fa.value + fb.value) / 2) return;  // chord test: linear piece

  auto [sa, ia] = cut_line(net, fa.cut);
  auto [sb, ib] = cut_line(net, fb.cut);
  if (sa == sb) {
    // same slope but a kink inside: fall back to plain bisection
    FlowResult fmid = maxflow_cut(net, mid);
    profile_rec(net, a, fa, mid, fmid, depth - 1, breaks);
    profile_rec(net, mid, fmid, b, fb, depth - 1, breaks);
    return;
  }
  Rat star = (ib - ia) / (sa - sb);
  FlowResult fs = maxflow_cut(net, star);
  if (fs.value == sa * star + ia && fs.value == sb * star + ib) {
    // both cut lines are tight at their meeting point: the single kink
    breaks.push_back(star);
    return;
  }
  profile_rec(net, a, fa, star, fs, depth - 1, breaks);
  profile_rec(net, star, fs, b, fb, depth - 1, breaks);
}

}  // namespace

Rat PLProfile::eval(const Rat& x) const { return eval_piecewise(points, x); }

PLProfile parametric_profile(const ParamNetwork& net, int depth_cap) {
  net.validate();
  PLProfile out;
  FlowResult flo = maxflow_cut(net, net.lo);
  if (net.lo == net.hi) {
    out.points.push_back({net.lo, flo.value});
    return out;
  }
  FlowResult fhi = maxflow_cut(net, net.hi);
  std::vector<Rat> breaks;
  profile_rec(net, net.lo, flo, net.hi, fhi, depth_cap, breaks);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  out.points.push_back({net.lo, flo.value});
  for (const Rat& x : breaks)
    if (x > net.lo && x < net.hi) out.points.push_back({x, maxflow(net, x)});
  out.points.push_back({net.hi, fhi.value});

  // drop collinear interior nodes
  std::vector<PLPoint> clean;
  for (const PLPoint& p : out.points) {
    while (clean.size() >= 2) {
      const PLPoint& q = clean[clean.size() - 1];
      const PLPoint& r = clean[clean.size() - 2];
      if ((q.y - r.y) * (p.x - q.x) == (p.y - q.y) * (q.x - r.x))
        clean.pop_back();
      else
        break;
    }
    clean.push_back(p);
  }
  out.points = std::move(clean);
  return out;
}

Rat RhoFan::eval(const Rat& x) const { return eval_piecewise(points, x); }

RhoFan make_fan(const PLProfile& profile) {
  if (profile.points.empty())
    throw std::invalid_argument("empty profile");
  RhoFan fan;
  fan.points = profile.points;
  fan.lo = fan.points.front().x;
  fan.hi = fan.points.back().x;
  fan.rho = fan.points.size() >= 2
                ? static_cast<int>(fan.points.size()) - 2
                : 0;
  fan.beta = 1;
  for (std::size_t i = 1; i + 1 < fan.points.size(); ++i)
    fan.beta = std::max({fan.beta, bitsize(fan.points[i].x),
                         bitsize(fan.points[i].y)});
  fan.convex = fan.concave = true;
  for (std::size_t i = 2; i < fan.points.size(); ++i) {
    const PLPoint& a = fan.points[i - 2];
    const PLPoint& b = fan.points[i - 1];
    const PLPoint& c = fan.points[i];
    Rat s1 = (b.y - a.y) / (b.x - a.x);
    Rat s2 = (c.y - b.y) / (c.x - b.x);
    if (s1 > s2) fan.convex = false;
    if (s1 < s2) fan.concave = false;
  }
  return fan;
}

Vec3 project(const Vec3& p) {
  if (sign(p.z) <= 0) throw std::invalid_argument("projection needs z > 0");
  return {p.x / p.z, p.y / p.z, Rat(1)};
}

bool pdec_member(const RhoFan& fan, const Vec3& p) {
  if (sign(p.z) <= 0) return false;
  Rat t = p.x / p.z;
  if (t < fan.lo || t > fan.hi) return false;
  return p.y / p.z <= fan.eval(t);
}

std::vector<Vec3> sample_points(const RhoFan& fan, int dS) {
  if (dS < 1) throw std::invalid_argument("dS must be >= 1");
  if (fan.points.size() < 2)
    throw std::invalid_argument("fan has no segments");
  long N = 10L * dS;
  std::vector<Vec3> out;
  for (std::size_t i = 0; i + 1 < fan.points.size(); ++i) {
    const PLPoint& l = fan.points[i];
    const PLPoint& r = fan.points[i + 1];
    for (long k = 1; k < N; ++k) {
      Rat x = (Rat(N - k) * l.x + Rat(k) * r.x) / Rat(N);
      Rat y = (Rat(N - k) * l.y + Rat(k) * r.y) / Rat(N);
      out.push_back({x, y, Rat(1)});
    }
  }
  return out;
}

namespace {

long floor_rat(const Rat& q) {
  Int r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return r.get_si();
}

long ceil_rat(const Rat& q) {
  Int r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return r.get_si();
}

}  // namespace

SepResult separates(const std::vector<Surface>& S, const RhoFan& fan,
                    const CompactK& K, long budget) {
  if (sign(K.mu) <= 0) throw std::invalid_argument("K needs mu > 0");
  long zlo = std::max(1L, ceil_rat(K.mu));
  long zhi = floor_rat(2 * K.mu);

  long count = 0;
  for (long z = zlo; z <= zhi; ++z) {
    long r = floor_rat(K.mu_xy * Rat(z));
    count += (2 * r + 1) * (2 * r + 1);
    if (count > budget)
      throw std::runtime_error("separates: enumeration budget " +
                               std::to_string(budget) + " exceeded");
  }

  struct Class {
    bool member;
    Vec3 first;
  };
  std::map<std::vector<int>, Class> classes;
  for (long z = zlo; z <= zhi; ++z) {
    long r = floor_rat(K.mu_xy * Rat(z));
    for (long x = -r; x <= r; ++x)
      for (long y = -r; y <= r; ++y) {
        Vec3 p{Rat(x), Rat(y), Rat(z)};
        std::vector<int> sig;
        sig.reserve(S.size());
        for (const auto& s : S)
          sig.push_back(s.poly.sign_at({p.x, p.y, p.z}));
        bool m = pdec_member(fan, p);
        auto [it, inserted] = classes.emplace(std::move(sig), Class{m, p});
        if (!inserted && it->second.member != m)
          return {false, std::make_pair(it->second.first, p)};
      }
  }
  return {true, std::nullopt};
}

int volatility(const UniPoly& c, const Rat& lo, const Rat& hi) {
  if (c.is_zero()) throw std::invalid_argument("volatility of zero");
  if (lo >= hi) return 0;
  UniPoly c3 = c.derivative(3);
  if (c3.degree() < 1) return 0;  // c'' affine or constant: no extrema
  auto roots = isolate_roots(c3, {{lo, hi}});
  int count = 0;
  Rat prev = lo;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const auto& iv = roots[i];
    Rat next = i + 1 < roots.size() ? roots[i + 1].lo : hi;
    if (iv.is_point()) {
      if (iv.lo > lo && iv.lo < hi) {
        Rat l = (prev + iv.lo) / 2;
        Rat r = (iv.lo + next) / 2;
        if (c3.sign_at(l) * c3.sign_at(r) < 0) ++count;
      }
      prev = iv.lo;
    } else {
      if (c3.sign_at(iv.lo) * c3.sign_at(iv.hi) < 0) ++count;
      prev = iv.hi;
    }
  }
  return count;
}

namespace {

PolySystem xyz_system(const std::string& provenance,
                      std::vector<MultiPoly> zeros) {
  PolySystem s;
  s.var_names = {"x", "y", "z"};
  s.input_vars = {0, 1, 2};
  for (auto& p : zeros)
    s.constraints.push_back({std::move(p), Rel::Eq, provenance, std::nullopt});
  return s;
}

}  // namespace

std::vector<PolySystem> collins_systems(const std::vector<Surface>& S,
                                        const CompactK& K) {
  if (sign(K.mu) <= 0) throw std::invalid_argument("K needs mu > 0");
  std::vector<PolySystem> out;
  MultiPoly x = MultiPoly::variable(0);
  MultiPoly y = MultiPoly::variable(1);
  MultiPoly z = MultiPoly::variable(2);

  for (std::size_t i = 0; i < S.size(); ++i) {
    const MultiPoly& p = S[i].poly;
    MultiPoly radial = x * p.partial_derivative(0) +
                       y * p.partial_derivative(1) +
                       z * p.partial_derivative(2);
    out.push_back(xyz_system("silhouette surface " + std::to_string(i),
                             {p, radial}));
  }
  for (std::size_t i = 0; i < S.size(); ++i)
    for (std::size_t j = i + 1; j < S.size(); ++j)
      out.push_back(xyz_system("intersection surfaces " + std::to_string(i) +
                                   "," + std::to_string(j),
                               {S[i].poly, S[j].poly}));

  int delta = 0;
  for (const auto& s : S) delta = std::max(delta, s.degree());
  for (long n = 1; delta >= 1 && n <= 6L * delta - 1; ++n) {
    Rat level = K.mu * (Rat(1) + Rat(n) / Rat(6 * delta));
    out.push_back(xyz_system("dividing plane " + std::to_string(n),
                             {z - MultiPoly::constant(level)}));
  }

  out.push_back(xyz_system("K boundary z = mu",
                           {z - MultiPoly::constant(K.mu)}));
  out.push_back(xyz_system("K boundary z = 2 mu",
                           {z - MultiPoly::constant(2 * K.mu)}));
  for (int s : {-1, 1}) {
    MultiPoly bound = z.scale(Rat(s) * K.mu_xy);
    out.push_back(xyz_system("K boundary x", {x - bound}));
    out.push_back(xyz_system("K boundary y", {y - bound}));
  }
  return out;
}

CertificateQuantities certificate_quantities(int p, int k,
                                             const PolySystem* measured) {
  if (p < 1 || k < 1) throw std::invalid_argument("p, k must be >= 1");
  CertificateQuantities q;
  q.equations = pow_int(Int(2 * p), static_cast<unsigned long>(4 * k));
  q.degree = pow2(static_cast<unsigned long>(4 * k));
  q.rho_threshold =
      pow2(static_cast<unsigned long>(k + 1)) *
      pow_int(Int(p), static_cast<unsigned long>(k));
  if (measured) {
    q.measured_equations = Int(static_cast<long>(measured->equation_count()));
    q.measured_degree = Int(measured->max_degree());
    q.ok = *q.measured_equations <= q.equations &&
           *q.measured_degree <= q.degree;
  }
  return q;
}

}  // namespace gmx
