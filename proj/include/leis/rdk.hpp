#pragma once
// Randomized Dobkin-Kirkpatrick simplification rounds and the cascade of
// progressively coarser overlays built from them.

#include <leis/generate.hpp>

#include <cmath>
#include <deque>
#include <sstream>

namespace leis {

struct RdkConfig {
  std::size_t T = 0;  // round length; 0 selects ceil(sqrt(log2 n))
  Scalar keep_probability = ratio(1, 2);
  std::size_t max_rebuilds = 3;
  std::uint64_t seed = 1;
  std::size_t degree_cap = 12;
  std::size_t crossing_threshold = 0;  // 0 disables rebuilds
  std::size_t max_polytopes = 64;      // the cascade's m bound is checked separately
};

inline std::size_t default_round_length(std::size_t n) {
  double l = std::log2(static_cast<double>(std::max<std::size_t>(n, 2)));
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::sqrt(l))));
}

enum class PolytopeKind { Original, Inner, Outer, Boundary };

struct HierarchyPolytope {
  Polyhedron polytope;
  std::size_t counter = 0;
  int origin = -1;  // index of the input polytope it descends from
  PolytopeKind kind = PolytopeKind::Original;
  bool inner_side = true;  // for Boundary: produced by the inner chain
  int parent = -1;         // chain predecessor, -1 for originals
};

enum class SimplifyMode { Deterministic, Randomized };

/// Size measure used for the 2^T threshold: vertices off the clipping box.
inline std::size_t simplification_size(const Polyhedron& P) {
  std::vector<char> on_box(P.vertex_count(), 0);
  for (const auto& f : P.faces)
    if (f.artificial)
      for (int v : f.cycle) on_box[v] = 1;
  std::size_t off = 0;
  for (char b : on_box) off += !b;
  return off;
}

inline bool is_simplex(const Polyhedron& P) { return P.vertex_count() <= 4; }
inline bool is_halfspace(const Polyhedron& P) { return P.real_face_count() <= 1; }

namespace detail {

inline bool keep(Rng& rng, const Scalar& p) {
  std::uniform_int_distribution<long> u(0, 999999);
  return ratio(u(rng), 1000000) < p;
}

// Face adjacency through shared edges.
inline std::vector<std::vector<int>> face_adjacency(const Polyhedron& P) {
  std::map<std::pair<int, int>, std::vector<int>> by_edge;
  for (std::size_t f = 0; f < P.faces.size(); ++f) {
    const auto& c = P.faces[f].cycle;
    for (std::size_t i = 0; i < c.size(); ++i) {
      int a = c[i], b = c[(i + 1) % c.size()];
      by_edge[{std::min(a, b), std::max(a, b)}].push_back(static_cast<int>(f));
    }
  }
  std::vector<std::vector<int>> adj(P.faces.size());
  for (const auto& [e, fs] : by_edge)
    for (int a : fs)
      for (int b : fs)
        if (a != b) adj[a].push_back(b);
  return adj;
}

}  // namespace detail

/// Greedy independent set over vertices (inner) in id order, degree at most `cap`.
/// Vertices on the clipping box are never chosen.
inline std::vector<int> independent_vertices(const Polyhedron& P, std::size_t cap) {
  auto adj = P.adjacency();
  std::vector<char> blocked(P.vertex_count(), 0);
  for (const auto& f : P.faces)
    if (f.artificial)
      for (int v : f.cycle) blocked[v] = 1;
  std::vector<int> I;
  for (std::size_t v = 0; v < P.vertex_count(); ++v) {
    if (blocked[v] || adj[v].size() > cap) continue;
    I.push_back(static_cast<int>(v));
    blocked[v] = 1;
    for (int u : adj[v]) blocked[u] = 1;
  }
  return I;
}

/// Greedy independent set over real faces (outer) in id order, at most `cap` edges each.
/// Faces of the clipping box are never chosen.
inline std::vector<int> independent_faces(const Polyhedron& P, std::size_t cap) {
  auto adj = detail::face_adjacency(P);
  std::vector<char> blocked(P.faces.size(), 0);
  for (std::size_t f = 0; f < P.faces.size(); ++f) blocked[f] = P.faces[f].artificial;
  std::vector<int> I;
  for (std::size_t f = 0; f < P.faces.size(); ++f) {
    if (blocked[f] || P.faces[f].cycle.size() > cap) continue;
    I.push_back(static_cast<int>(f));
    blocked[f] = 1;
    for (int g : adj[f]) blocked[g] = 1;
  }
  return I;
}

struct StepStats {
  std::size_t chosen = 0, deleted = 0;
};

/// One inner step: deletes vertices of an independent set and takes the hull of the rest.
/// Deletions that would flatten the polytope are undone one at a time.
inline Polyhedron inner_step(const Polyhedron& P, Rng& rng, SimplifyMode mode, const RdkConfig& cfg,
                             StepStats* st = nullptr) {
  auto I = independent_vertices(P, cfg.degree_cap);
  std::vector<char> del(P.vertex_count(), 0);
  std::vector<int> order;
  for (int v : I)
    if (mode == SimplifyMode::Deterministic || !detail::keep(rng, cfg.keep_probability)) {
      del[v] = 1;
      order.push_back(v);
    }
  if (st) st->chosen += I.size();
  for (;;) {
    std::vector<Point3> rest;
    for (std::size_t v = 0; v < P.vertex_count(); ++v)
      if (!del[v]) rest.push_back(P.vertices[v]);
    if (rest.size() >= 4) {
      try {
        Polyhedron Q = convex_hull(rest);
        for (auto& f : Q.faces)
          for (const auto& g : P.faces)
            if (g.artificial && g.plane.same_plane(f.plane)) f.artificial = true;
        if (st) st->deleted += order.size();
        return Q;
      } catch (const std::invalid_argument&) {
      }
    }
    if (order.empty()) return P;
    del[order.back()] = 0;
    order.pop_back();
  }
}

/// One outer step: drops the halfspaces of an independent set of faces.
inline Polyhedron outer_step(const Polyhedron& P, const Box& box, Rng& rng, SimplifyMode mode,
                             const RdkConfig& cfg, StepStats* st = nullptr) {
  auto I = independent_faces(P, cfg.degree_cap);
  std::vector<char> del(P.faces.size(), 0);
  for (int f : I)
    if (mode == SimplifyMode::Deterministic || !detail::keep(rng, cfg.keep_probability)) {
      del[f] = 1;
      if (st) ++st->deleted;
    }
  if (st) st->chosen += I.size();
  std::vector<HalfSpace> hs;
  for (std::size_t f = 0; f < P.faces.size(); ++f)
    if (!del[f] && !P.faces[f].artificial) hs.push_back(P.faces[f].plane);
  Polyhedron Q = Polyhedron::from_box(box);
  for (std::size_t i = 0; i < hs.size(); ++i) Q = Q.clipped(hs[i], false, static_cast<int>(i));
  return Q;
}

/// One round of simplification of P. Returns the produced polytopes; the
/// boundary polytopes (if any) are flagged with kind Boundary. `parent` is the
/// index of the chain predecessor in the result, or -1 for P itself.
inline std::vector<HierarchyPolytope> rdk_round(const HierarchyPolytope& P, const Box& box, std::size_t T,
                                                Rng& rng, const RdkConfig& cfg,
                                                std::vector<StepStats>* stats = nullptr) {
  std::vector<HierarchyPolytope> out;
  bool small = simplification_size(P.polytope) <= (std::size_t{1} << std::min<std::size_t>(T, 30));
  SimplifyMode mode = small ? SimplifyMode::Deterministic : SimplifyMode::Randomized;
  for (bool inner : {true, false}) {
    Polyhedron cur = P.polytope;
    int prev = -1;
    for (std::size_t step = 0; small || step < T; ++step) {
      if (inner ? is_simplex(cur) : is_halfspace(cur)) break;
      StepStats s;
      Polyhedron next = inner ? inner_step(cur, rng, mode, cfg, &s) : outer_step(cur, box, rng, mode, cfg, &s);
      if (stats) stats->push_back(s);
      if (s.chosen == 0 || (small && s.deleted == 0)) break;
      cur = std::move(next);
      out.push_back({cur, P.counter + 1, P.origin, inner ? PolytopeKind::Inner : PolytopeKind::Outer, inner, prev});
      prev = static_cast<int>(out.size()) - 1;
    }
    if (!small && !out.empty() && out.back().inner_side == inner) out.back().kind = PolytopeKind::Boundary;
  }
  return out;
}

struct Hierarchy {
  std::vector<HierarchyPolytope> polys;
  std::size_t T = 1;
  std::size_t max_counter() const {
    std::size_t x = 0;
    for (const auto& p : polys) x = std::max(x, p.counter);
    return x;
  }
};

/// The worklist procedure: every input polytope and all its simplifications with counters.
inline Hierarchy build_hierarchy(const std::vector<Polyhedron>& S, const Box& box, const RdkConfig& cfg,
                                 Rng& rng, std::vector<StepStats>* stats = nullptr) {
  Hierarchy h;
  std::size_t n = 0;
  for (const auto& P : S) n += P.complexity();
  h.T = cfg.T ? cfg.T : default_round_length(n);
  for (std::size_t i = 0; i < S.size(); ++i) {
    h.polys.push_back({S[i], 0, static_cast<int>(i), PolytopeKind::Original, true, -1});
    std::deque<int> X{static_cast<int>(h.polys.size()) - 1};
    while (!X.empty()) {
      int id = X.front();
      X.pop_front();
      HierarchyPolytope P = h.polys[id];
      if (P.counter > 256) throw std::runtime_error("build_hierarchy: simplification does not terminate");
      int base = static_cast<int>(h.polys.size());
      for (auto& Q : rdk_round(P, box, h.T, rng, cfg, stats)) {
        Q.parent = Q.parent < 0 ? id : base + Q.parent;
        h.polys.push_back(std::move(Q));
        if (h.polys.back().kind == PolytopeKind::Boundary) X.push_back(static_cast<int>(h.polys.size()) - 1);
      }
    }
  }
  return h;
}


namespace detail {

// Floating-point shadow of an exact halfspace, with a conservative error bound.
struct FastHalfSpace {
  HalfSpace exact;
  double nx, ny, nz, d;
  explicit FastHalfSpace(const HalfSpace& h)
      : exact(h), nx(h.nx.get_d()), ny(h.ny.get_d()), nz(h.nz.get_d()), d(h.d.get_d()) {}
  HalfSpace flipped() const { return {-exact.nx, -exact.ny, -exact.nz, -exact.d}; }
};

struct FastBox {
  double lo[3], hi[3];
  bool overlaps(const FastBox& o) const {
    for (int k = 0; k < 3; ++k)
      if (hi[k] < o.lo[k] - 1e-9 || o.hi[k] < lo[k] - 1e-9) return false;
    return true;
  }
};

inline std::array<double, 3> to_double(const Point3& p) { return {p.x.get_d(), p.y.get_d(), p.z.get_d()}; }

inline FastBox fast_bounds(const std::vector<std::array<double, 3>>& v) {
  FastBox b{{v[0][0], v[0][1], v[0][2]}, {v[0][0], v[0][1], v[0][2]}};
  for (const auto& p : v)
    for (int k = 0; k < 3; ++k) {
      b.lo[k] = std::min(b.lo[k], p[k]);
      b.hi[k] = std::max(b.hi[k], p[k]);
    }
  return b;
}

// Exact sign of h at vertex i, filtered through doubles.
inline int fast_sign(const FastHalfSpace& h, const Point3& p, const std::array<double, 3>& q) {
  double a = h.nx * q[0], b = h.ny * q[1], c = h.nz * q[2];
  double v = a + b + c - h.d;
  double err = 1e-12 * (std::fabs(a) + std::fabs(b) + std::fabs(c) + std::fabs(h.d)) + 1e-300;
  if (v > err) return 1;
  if (v < -err) return -1;
  return sign(h.exact.side(p));
}

}  // namespace detail

/// A convex cell of one cascade level.
struct CascadeCell {
  Polyhedron poly;
  std::vector<std::array<double, 3>> dverts;
  detail::FastBox bb;
  std::uint64_t members = 0;  // input polytopes containing the cell
  int parent = -1;            // containing cell of the next coarser level
  std::vector<int> children;  // crossing cells of the next finer level

  explicit CascadeCell(Polyhedron p) : poly(std::move(p)) { refresh(); }
  void refresh() {
    dverts.clear();
    for (const auto& v : poly.vertices) dverts.push_back(detail::to_double(v));
    bb = detail::fast_bounds(dverts);
  }
  bool contains(const Point3& q) const { return poly.contains(q); }
};

struct CascadeLevel {
  std::size_t j = 0;
  std::vector<int> polytopes;  // hierarchy polytopes with counter >= j
  std::vector<CascadeCell> cells;
};

struct Cascade {
  Box box;
  Hierarchy hierarchy;
  std::size_t m = 0, n = 0;
  std::size_t rebuilds = 0;
  std::uint64_t seed = 0;
  std::vector<CascadeLevel> levels;  // levels[j] is A_j; the last one is A_x

  std::size_t x() const { return levels.size() - 1; }
  std::size_t total_cells() const {
    std::size_t s = 0;
    for (const auto& l : levels) s += l.cells.size();
    return s;
  }
  std::size_t max_crossing() const {
    std::size_t c = 0;
    for (std::size_t j = 1; j < levels.size(); ++j)
      for (const auto& cell : levels[j].cells) c = std::max(c, cell.children.size());
    return c;
  }
};

struct CascadeLocation {
  int cell = -1;  // in A_0
  std::uint64_t members = 0;
  std::size_t coarse_tests = 0;             // cells of A_x examined
  std::vector<std::size_t> level_tests;     // crossing-list entries examined per level
  std::size_t total_tests() const {
    std::size_t s = coarse_tests;
    for (auto t : level_tests) s += t;
    return s;
  }
};

namespace detail {

// Splits cell c by polytope P into the piece inside P and convex pieces outside it.
// Returns false (and leaves `out` untouched) when c is inside P or disjoint from its interior.
inline bool split_cell(const CascadeCell& c, const std::vector<FastHalfSpace>& P, const FastBox& pb,
                       std::vector<Polyhedron>& out, bool& inside) {
  inside = false;
  if (!c.bb.overlaps(pb)) return false;
  std::vector<int> mixed;
  for (std::size_t h = 0; h < P.size(); ++h) {
    bool neg = false, pos = false;
    for (std::size_t v = 0; v < c.dverts.size() && !(neg && pos); ++v) {
      int s = fast_sign(P[h], c.poly.vertices[v], c.dverts[v]);
      neg |= s < 0;
      pos |= s > 0;
    }
    if (!neg) return false;  // interiors are disjoint
    if (pos) mixed.push_back(static_cast<int>(h));
  }
  if (mixed.empty()) {
    inside = true;
    return false;
  }
  std::vector<Polyhedron> pieces;
  Polyhedron rest = c.poly;
  for (int h : mixed) {
    Polyhedron in = rest.clipped(P[h].exact);
    if (in.empty()) return false;  // the remaining part misses P after all
    Polyhedron o = rest.clipped(P[h].flipped());
    if (!o.empty()) pieces.push_back(std::move(o));
    rest = std::move(in);
  }
  pieces.push_back(std::move(rest));
  inside = true;  // the last piece
  out = std::move(pieces);
  return true;
}

}  // namespace detail

/// Builds A_x, ..., A_0 as a refinement tree. Each cell of A_j is split by the
/// polytopes of counter j - 1, so its crossing cells in A_{j-1} are exactly its pieces.
inline Cascade build_cascade_once(const std::vector<Polyhedron>& S, const Box& box, const RdkConfig& cfg,
                                  std::uint64_t seed) {
  Cascade cs;
  cs.box = box;
  cs.m = S.size();
  cs.seed = seed;
  for (const auto& P : S) cs.n += P.complexity();
  Rng rng(seed);
  cs.hierarchy = build_hierarchy(S, box, cfg, rng);
  const auto& polys = cs.hierarchy.polys;
  std::size_t x = cs.hierarchy.max_counter();
  cs.levels.resize(x + 1);

  std::vector<CascadeCell> cur{CascadeCell(Polyhedron::from_box(box))};
  std::vector<int> origin{-1};
  for (std::size_t jj = x + 1; jj-- > 0;) {
    for (std::size_t p = 0; p < polys.size(); ++p) {
      if (polys[p].counter != jj) continue;
      std::vector<detail::FastHalfSpace> hs;
      for (const auto& h : polys[p].polytope.halfspaces(false)) hs.emplace_back(h);
      std::vector<std::array<double, 3>> pv;
      for (const auto& v : polys[p].polytope.vertices) pv.push_back(detail::to_double(v));
      detail::FastBox pb = detail::fast_bounds(pv);
      std::uint64_t bit = polys[p].kind == PolytopeKind::Original ? std::uint64_t{1} << polys[p].origin : 0;
      std::vector<CascadeCell> next;
      std::vector<int> next_origin;
      next.reserve(cur.size());
      for (std::size_t c = 0; c < cur.size(); ++c) {
        std::vector<Polyhedron> pieces;
        bool inside = false;
        if (!detail::split_cell(cur[c], hs, pb, pieces, inside)) {
          if (inside) cur[c].members |= bit;
          next.push_back(std::move(cur[c]));
          next_origin.push_back(origin[c]);
          continue;
        }
        for (std::size_t k = 0; k < pieces.size(); ++k) {
          CascadeCell nc(std::move(pieces[k]));
          nc.members = cur[c].members | (k + 1 == pieces.size() ? bit : 0);
          next.push_back(std::move(nc));
          next_origin.push_back(origin[c]);
        }
      }
      cur = std::move(next);
      origin = std::move(next_origin);
    }
    CascadeLevel& L = cs.levels[jj];
    L.j = jj;
    for (std::size_t p = 0; p < polys.size(); ++p)
      if (polys[p].counter >= jj) L.polytopes.push_back(static_cast<int>(p));
    for (std::size_t c = 0; c < cur.size(); ++c) {
      cur[c].parent = origin[c];
      if (jj < x) cs.levels[jj + 1].cells[origin[c]].children.push_back(static_cast<int>(c));
    }
    L.cells = cur;
    for (std::size_t c = 0; c < cur.size(); ++c) origin[c] = static_cast<int>(c);
  }
  return cs;
}

struct CascadeBuildError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Builds the cascade, rebuilding with a fresh seed while some crossing list
/// exceeds cfg.crossing_threshold.
inline Cascade build_cascade(const std::vector<Polyhedron>& S, const Box& box, const RdkConfig& cfg) {
  if (S.empty()) throw std::invalid_argument("build_cascade: no polytopes");
  if (S.size() > 64) throw std::invalid_argument("build_cascade: more than 64 polytopes");
  std::size_t n = 0;
  for (const auto& P : S) {
    if (!P.valid()) throw std::invalid_argument("build_cascade: polytope is not convex");
    n += P.complexity();
  }
  std::size_t bound = std::size_t{1} << std::min<std::size_t>(default_round_length(n), 62);
  if (S.size() > bound) throw std::invalid_argument("build_cascade: m exceeds 2^ceil(sqrt(log2 n))");
  std::uint64_t seed = cfg.seed;
  for (std::size_t attempt = 0;; ++attempt) {
    Cascade cs = build_cascade_once(S, box, cfg, seed);
    cs.rebuilds = attempt;
    std::size_t worst = cs.max_crossing();
    if (cfg.crossing_threshold == 0 || worst <= cfg.crossing_threshold) return cs;
    if (attempt >= cfg.max_rebuilds)
      throw CascadeBuildError("build_cascade: rebuild budget exhausted; max crossing " + std::to_string(worst) +
                              " exceeds threshold " + std::to_string(cfg.crossing_threshold));
    seed = seed * 6364136223846793005ULL + 1442695040888963407ULL;
  }
}

/// Top-down location: brute force over A_x, then one crossing-list scan per level.
inline CascadeLocation cascade_locate(const Cascade& cs, const Point3& q) {
  if (!cs.box.contains(q)) throw std::out_of_range("cascade_locate: query outside the box");
  CascadeLocation r;
  const auto& top = cs.levels.back().cells;
  int c = -1;
  for (std::size_t i = 0; i < top.size() && c < 0; ++i) {
    ++r.coarse_tests;
    if (top[i].contains(q)) c = static_cast<int>(i);
  }
  for (std::size_t j = cs.levels.size() - 1; j-- > 0;) {
    std::size_t tests = 0;
    int next = -1;
    for (int ch : cs.levels[j + 1].cells[c].children) {
      ++tests;
      if (cs.levels[j].cells[ch].contains(q)) {
        next = ch;
        break;
      }
    }
    r.level_tests.push_back(tests);
    if (next < 0) throw std::logic_error("cascade_locate: crossing list misses the query");
    c = next;
  }
  r.cell = c;
  r.members = cs.levels[0].cells[c].members;
  return r;
}


/// Statistics of Lemma basicprop and the crossing bound of Lemma int.
struct HierarchyReport {
  std::size_t n = 0, m = 0, T = 0, x = 0, M = 0, rebuilds = 0;
  double x_ratio = 0;          // x T / log2 n
  double M_ratio = 0;          // M / (m 2^x T)
  std::vector<std::size_t> level_sizes;
  double size_ratio = 0;       // max |A_j| / (n M^2)
  std::size_t max_cell_complexity = 0;  // delta
  std::size_t X = 0;           // max vertices / edges of an A_{j-1} polytope meeting an A_j cell
  std::size_t L = 0;           // polytopes in the finest overlay
  std::size_t max_crossing = 0;
  double crossing_constant = 0;  // max crossing / (L^3 X + L^3 d + L^2 d^2 + L d^3)
  bool crossing_complete = true;
  bool crossing_checked = false;

  static std::string csv_header() {
    return "seed,n,m,T,x,M,rebuilds,x_ratio,M_ratio,cells,size_ratio,delta,X,L,max_crossing,crossing_constant";
  }
  std::string csv_row(std::uint64_t seed) const {
    std::size_t cells = 0;
    for (auto s : level_sizes) cells += s;
    std::ostringstream os;
    os << seed << ',' << n << ',' << m << ',' << T << ',' << x << ',' << M << ',' << rebuilds << ',' << x_ratio << ','
       << M_ratio << ',' << cells << ',' << size_ratio << ',' << max_cell_complexity << ',' << X << ',' << L << ','
       << max_crossing << ',' << crossing_constant;
    return os.str();
  }
};

namespace detail {

inline bool segment_meets(const Point3& a, const Point3& b, const Polyhedron& C) {
  Scalar lo = 0, hi = 1;
  for (const auto& f : C.faces) {
    Scalar sa = f.plane.side(a), sb = f.plane.side(b);
    Scalar den = sb - sa;
    if (sign(den) == 0) {
      if (sign(sa) > 0) return false;
      continue;
    }
    Scalar t = -sa / den;
    if (sign(den) > 0) {
      if (t < hi) hi = t;
    } else if (t > lo) {
      lo = t;
    }
    if (lo > hi) return false;
  }
  return true;
}

}  // namespace detail

/// Exhaustive crossing-list check: for consecutive levels, every pair of cells with
/// intersecting interiors is listed, and every listed pair intersects.
inline bool verify_crossing_lists(const Cascade& cs) {
  for (std::size_t j = 1; j < cs.levels.size(); ++j) {
    const auto& A = cs.levels[j].cells;
    const auto& B = cs.levels[j - 1].cells;
    for (std::size_t a = 0; a < A.size(); ++a) {
      std::set<int> listed(A[a].children.begin(), A[a].children.end());
      for (std::size_t b = 0; b < B.size(); ++b) {
        bool meet = A[a].bb.overlaps(B[b].bb) && interiors_intersect(A[a].poly, B[b].poly);
        if (meet != static_cast<bool>(listed.count(static_cast<int>(b)))) return false;
      }
    }
  }
  return true;
}

inline HierarchyReport validate_hierarchy(const Cascade& cs, bool exhaustive_crossings = false) {
  HierarchyReport r;
  const auto& polys = cs.hierarchy.polys;
  r.n = cs.n;
  r.m = cs.m;
  r.T = cs.hierarchy.T;
  r.x = cs.x();
  r.M = polys.size();
  r.rebuilds = cs.rebuilds;
  r.x_ratio = static_cast<double>(r.x * r.T) / std::log2(static_cast<double>(std::max<std::size_t>(r.n, 2)));
  r.M_ratio = static_cast<double>(r.M) / (static_cast<double>(r.m) * std::ldexp(1.0, static_cast<int>(r.x)) *
                                          static_cast<double>(r.T));
  double nm2 = static_cast<double>(r.n) * static_cast<double>(r.M) * static_cast<double>(r.M);
  for (const auto& L : cs.levels) {
    r.level_sizes.push_back(L.cells.size());
    r.size_ratio = std::max(r.size_ratio, static_cast<double>(L.cells.size()) / nm2);
    for (const auto& c : L.cells) r.max_cell_complexity = std::max(r.max_cell_complexity, c.poly.complexity());
  }
  r.L = cs.levels.empty() ? 0 : cs.levels[0].polytopes.size();
  r.max_crossing = cs.max_crossing();

  // X: for a cell of A_j and a polytope of A_{j-1}, vertices inside and edges meeting the cell.
  std::vector<std::vector<std::array<double, 3>>> pv(polys.size());
  std::vector<detail::FastBox> pb(polys.size());
  for (std::size_t p = 0; p < polys.size(); ++p) {
    for (const auto& v : polys[p].polytope.vertices) pv[p].push_back(detail::to_double(v));
    pb[p] = detail::fast_bounds(pv[p]);
  }
  for (std::size_t j = 1; j < cs.levels.size(); ++j)
    for (const auto& cell : cs.levels[j].cells)
      for (int p : cs.levels[j - 1].polytopes) {
        if (!cell.bb.overlaps(pb[p])) continue;
        const Polyhedron& P = polys[p].polytope;
        std::size_t vin = 0, ein = 0;
        for (const auto& v : P.vertices) vin += cell.poly.contains(v);
        for (auto [a, b] : P.edges()) ein += detail::segment_meets(P.vertices[a], P.vertices[b], cell.poly);
        r.X = std::max({r.X, vin, ein});
      }
  double L = static_cast<double>(std::max<std::size_t>(r.L, 1)), d = static_cast<double>(r.max_cell_complexity);
  double X = static_cast<double>(std::max<std::size_t>(r.X, 1));
  double bound = L * L * L * X + L * L * L * d + L * L * d * d + L * d * d * d;
  r.crossing_constant = static_cast<double>(r.max_crossing) / bound;
  if (exhaustive_crossings) {
    r.crossing_checked = true;
    r.crossing_complete = verify_crossing_lists(cs);
  }
  return r;
}

}  // namespace leis
