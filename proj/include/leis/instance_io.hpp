#pragma once
// Line-oriented instance files.
//
//   leis-instance 1
//   kind <planes|weighted-points|colored-points|catalog|polytopes>
//   seed <u64>
//   box <xmin> <xmax> <ymin> <ymax> <zmin> <zmax>
//   variant <path|general>            catalog only
//   degree <d>                        catalog only
//   vertex <v>                        catalog vertices, 0..|G|-1
//   edge <u> <v>
//   plane <id> <a> <b> <c> [vertex <v>]    z = a x + b y + c
//   point <id> <x> <y> <z> [weight <w>] [color <c>]
//   hull <polytope> <x> <y> <z>       polytope = hull of its points
//   query <x> <y> <z>
//
// Cutting files reuse the header with kind cutting:
//   cutting <k> <alpha>
//   prism <t> finite <x0> <y0> <z0> <x1> <y1> <z1> <x2> <y2> <z2> conflicts <id>...
//   prism <t> infinite <plane a b c | none> conflicts <id>...
//
// Numbers are integers or num/den. '#' starts a comment.

#include <leis/applications.hpp>

#include <fstream>
#include <iomanip>

namespace leis {

struct InstancePoint {
  int id = -1;
  Point3 p;
  std::optional<Scalar> weight;
  std::optional<int> color;
};

struct Instance {
  std::string kind = "planes";
  std::uint64_t seed = 0;
  Box box = default_box();
  CatalogVariant variant = CatalogVariant::General;
  std::size_t degree = 3;
  std::size_t vertices = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<Plane> planes;
  std::vector<int> plane_vertex;  // -1 when unassigned
  std::vector<InstancePoint> points;
  std::map<int, std::vector<Point3>> hulls;
  std::vector<Point3> queries;

  CatalogGraph catalog() const {
    CatalogGraph G;
    G.variant = variant;
    G.max_degree = degree;
    for (std::size_t v = 0; v < vertices; ++v) G.add_vertex();
    for (std::size_t i = 0; i < planes.size(); ++i) {
      int v = plane_vertex[i];
      if (v < 0 || static_cast<std::size_t>(v) >= vertices) throw std::invalid_argument("plane without a vertex");
      G.planes[v].push_back(planes[i]);
    }
    for (auto [u, v] : edges) G.add_edge(u, v);
    G.validate();
    return G;
  }
  std::vector<Polyhedron> polytopes() const {
    std::vector<Polyhedron> S;
    for (const auto& [id, pts] : hulls) S.push_back(convex_hull(pts));
    return S;
  }
};

inline void write_instance(std::ostream& o, const Instance& I) {
  o << "leis-instance 1\n";
  o << "kind " << I.kind << "\n";
  o << "seed " << I.seed << "\n";
  o << "box " << I.box.xmin << ' ' << I.box.xmax << ' ' << I.box.ymin << ' ' << I.box.ymax << ' ' << I.box.zmin
    << ' ' << I.box.zmax << "\n";
  if (I.kind == "catalog") {
    o << "variant " << (I.variant == CatalogVariant::Path ? "path" : "general") << "\n";
    o << "degree " << I.degree << "\n";
    for (std::size_t v = 0; v < I.vertices; ++v) o << "vertex " << v << "\n";
    for (auto [u, v] : I.edges) o << "edge " << u << ' ' << v << "\n";
  }
  for (std::size_t i = 0; i < I.planes.size(); ++i) {
    const auto& h = I.planes[i];
    o << "plane " << h.id << ' ' << h.a << ' ' << h.b << ' ' << h.c;
    if (I.plane_vertex[i] >= 0) o << " vertex " << I.plane_vertex[i];
    o << "\n";
  }
  for (const auto& p : I.points) {
    o << "point " << p.id << ' ' << p.p.x << ' ' << p.p.y << ' ' << p.p.z;
    if (p.weight) o << " weight " << *p.weight;
    if (p.color) o << " color " << *p.color;
    o << "\n";
  }
  for (const auto& [id, pts] : I.hulls)
    for (const auto& p : pts) o << "hull " << id << ' ' << p.x << ' ' << p.y << ' ' << p.z << "\n";
  for (const auto& q : I.queries) o << "query " << q.x << ' ' << q.y << ' ' << q.z << "\n";
}

inline Instance read_instance(std::istream& in) {
  Instance I;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<std::string> f;
    for (std::string w; ls >> w;) f.push_back(w);
    if (f.empty()) continue;
    auto need = [&](std::size_t n) {
      if (f.size() < n) throw std::invalid_argument("line " + std::to_string(lineno) + ": too few fields");
    };
    auto num = [&](std::size_t i) { return parse_scalar(f[i]); };
    auto integer = [&](std::size_t i) { return std::stol(f[i]); };
    const std::string& r = f[0];
    if (r == "leis-instance") {
      need(2);
      if (f[1] != "1") throw std::invalid_argument("unsupported instance version " + f[1]);
      header = true;
    } else if (!header) {
      throw std::invalid_argument("missing leis-instance header");
    } else if (r == "kind") {
      need(2);
      I.kind = f[1];
    } else if (r == "seed") {
      need(2);
      I.seed = std::stoull(f[1]);
    } else if (r == "box") {
      need(7);
      I.box = {num(1), num(2), num(3), num(4), num(5), num(6)};
    } else if (r == "variant") {
      need(2);
      if (f[1] != "path" && f[1] != "general") throw std::invalid_argument("unknown variant " + f[1]);
      I.variant = f[1] == "path" ? CatalogVariant::Path : CatalogVariant::General;
    } else if (r == "degree") {
      need(2);
      I.degree = static_cast<std::size_t>(integer(1));
    } else if (r == "vertex") {
      need(2);
      I.vertices = std::max<std::size_t>(I.vertices, static_cast<std::size_t>(integer(1)) + 1);
    } else if (r == "edge") {
      need(3);
      I.edges.emplace_back(static_cast<int>(integer(1)), static_cast<int>(integer(2)));
    } else if (r == "plane") {
      need(5);
      I.planes.push_back({num(2), num(3), num(4), static_cast<int>(integer(1))});
      I.plane_vertex.push_back(f.size() >= 7 && f[5] == "vertex" ? static_cast<int>(integer(6)) : -1);
    } else if (r == "point") {
      need(5);
      InstancePoint p{static_cast<int>(integer(1)), {num(2), num(3), num(4)}, std::nullopt, std::nullopt};
      for (std::size_t i = 5; i + 1 < f.size(); i += 2) {
        if (f[i] == "weight") p.weight = num(i + 1);
        else if (f[i] == "color") p.color = static_cast<int>(integer(i + 1));
        else throw std::invalid_argument("line " + std::to_string(lineno) + ": unknown point field " + f[i]);
      }
      I.points.push_back(p);
    } else if (r == "hull") {
      need(5);
      I.hulls[static_cast<int>(integer(1))].push_back({num(2), num(3), num(4)});
    } else if (r == "query") {
      need(4);
      I.queries.push_back({num(1), num(2), num(3)});
    } else {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": unknown record " + r);
    }
  }
  if (!header) throw std::invalid_argument("missing leis-instance header");
  return I;
}

inline Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_instance(in);
}

inline void write_cutting(std::ostream& o, const ShallowCutting& C, std::uint64_t seed = 0) {
  o << "leis-instance 1\nkind cutting\nseed " << seed << "\n";
  o << "box " << C.surface.box.xmin << ' ' << C.surface.box.xmax << ' ' << C.surface.box.ymin << ' '
    << C.surface.box.ymax << ' ' << C.surface.box.zmin << ' ' << C.surface.box.zmax << "\n";
  o << "cutting " << C.k << ' ' << C.alpha << "\n";
  for (std::size_t t = 0; t < C.size(); ++t) {
    const Triangle& T = C.surface.triangles[t];
    o << "prism " << t;
    if (T.infinite) {
      o << " infinite";
      if (T.has_plane) o << " plane " << T.plane.a << ' ' << T.plane.b << ' ' << T.plane.c;
      else o << " none";
    } else {
      o << " finite";
      for (const auto& p : T.p) o << ' ' << p.x << ' ' << p.y << ' ' << p.z;
    }
    o << " conflicts";
    for (int id : C.conflicts[t]) o << ' ' << id;
    o << "\n";
  }
}

struct PrismRecord {
  Triangle tri;
  std::vector<int> conflicts;
};

struct CuttingFile {
  Box box = default_box();
  std::size_t k = 0;
  Scalar alpha;
  std::vector<PrismRecord> prisms;
};

inline CuttingFile read_cutting(std::istream& in) {
  CuttingFile F;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<std::string> f;
    for (std::string w; ls >> w;) f.push_back(w);
    if (f.empty()) continue;
    auto bad = [&] { return std::invalid_argument("bad cutting record: " + line); };
    if (f[0] == "leis-instance") {
      header = f.size() == 2 && f[1] == "1";
    } else if (!header) {
      throw std::invalid_argument("missing leis-instance header");
    } else if (f[0] == "kind") {
      if (f.size() != 2 || f[1] != "cutting") throw bad();
    } else if (f[0] == "seed") {
    } else if (f[0] == "box") {
      if (f.size() != 7) throw bad();
      F.box = {parse_scalar(f[1]), parse_scalar(f[2]), parse_scalar(f[3]),
               parse_scalar(f[4]), parse_scalar(f[5]), parse_scalar(f[6])};
    } else if (f[0] == "cutting") {
      if (f.size() != 3) throw bad();
      F.k = std::stoul(f[1]);
      F.alpha = parse_scalar(f[2]);
    } else if (f[0] == "prism") {
      if (f.size() < 4) throw bad();
      PrismRecord P;
      std::size_t i = 3;
      if (f[2] == "finite") {
        if (f.size() < 13) throw bad();
        for (int c = 0; c < 3; ++c, i += 3)
          P.tri.p[c] = {parse_scalar(f[i]), parse_scalar(f[i + 1]), parse_scalar(f[i + 2])};
        P.tri.plane = plane_through(P.tri.p[0], P.tri.p[1], P.tri.p[2]);
      } else if (f[2] == "infinite" && f[3] == "none") {
        P.tri = Triangle::at_infinity();
        i = 4;
      } else if (f[2] == "infinite" && f[3] == "plane" && f.size() >= 7) {
        P.tri = Triangle::covering({parse_scalar(f[4]), parse_scalar(f[5]), parse_scalar(f[6])});
        i = 7;
      } else {
        throw bad();
      }
      if (i >= f.size() || f[i] != "conflicts") throw bad();
      for (++i; i < f.size(); ++i) P.conflicts.push_back(std::stoi(f[i]));
      F.prisms.push_back(std::move(P));
    } else {
      throw bad();
    }
  }
  if (!header) throw std::invalid_argument("missing leis-instance header");
  return F;
}

enum class CatalogShape { Path, BinaryTree, RandomDegree3 };

struct InstanceSpec {
  std::string kind = "planes";
  std::size_t n = 100;       // planes or points
  std::size_t m = 4;         // colors or polytopes
  std::size_t vertices = 8;  // |G|
  std::size_t degree = 3;
  CatalogShape shape = CatalogShape::Path;
  std::uint64_t seed = 1;
  std::size_t queries = 0;
};

inline Instance generate_instance(const InstanceSpec& spec) {
  if (spec.n == 0 && spec.kind != "polytopes") throw std::invalid_argument("generate: empty instance");
  Rng rng(spec.seed);
  Instance I;
  I.kind = spec.kind;
  I.seed = spec.seed;
  auto add_queries = [&](const std::vector<Plane>& H) {
    for (std::size_t i = 0; i < spec.queries; ++i)
      I.queries.push_back(random_query_near_level(rng, H, std::min<std::size_t>(H.size() / 8, 64), I.box));
  };
  if (spec.kind == "planes") {
    I.planes = random_planes(rng, spec.n);
    I.plane_vertex.assign(I.planes.size(), -1);
    add_queries(I.planes);
  } else if (spec.kind == "weighted-points" || spec.kind == "colored-points") {
    std::vector<Plane> H;
    if (spec.kind == "weighted-points") {
      for (const auto& p : random_weighted_points(rng, spec.n, static_cast<long>(spec.n)))
        I.points.push_back({p.id, p.p, p.w, std::nullopt});
    } else {
      for (const auto& p : random_colored_points(rng, spec.n, spec.m)) I.points.push_back({p.id, p.p, std::nullopt, p.color});
    }
    for (const auto& p : I.points) H.push_back(dual_plane(p.p, p.id));
    add_queries(H);
  } else if (spec.kind == "catalog") {
    if (spec.vertices == 0) throw std::invalid_argument("generate: empty catalog");
    I.vertices = spec.vertices;
    I.degree = spec.shape == CatalogShape::Path ? 2 : std::max<std::size_t>(spec.degree, 3);
    I.variant = spec.shape == CatalogShape::Path ? CatalogVariant::Path : CatalogVariant::General;
    I.planes = random_planes(rng, spec.n);
    for (std::size_t i = 0; i < I.planes.size(); ++i) I.plane_vertex.push_back(static_cast<int>(i % spec.vertices));
    const int V = static_cast<int>(spec.vertices);
    if (spec.shape == CatalogShape::Path) {
      for (int v = 1; v < V; ++v) I.edges.emplace_back(v - 1, v);
    } else if (spec.shape == CatalogShape::BinaryTree) {
      for (int v = 1; v < V; ++v) I.edges.emplace_back((v - 1) / 2, v);
    } else {
      std::vector<std::size_t> sizes(spec.vertices, 0);
      auto G = random_catalog(rng, CatalogVariant::General, sizes, I.degree, spec.vertices / 4);
      for (int u = 0; u < V; ++u)
        for (int v : G.adj[u])
          if (u < v) I.edges.emplace_back(u, v);
    }
    add_queries(I.planes);
  } else if (spec.kind == "polytopes") {
    std::uniform_int_distribution<long> c(-40, 40);
    std::size_t pts = std::max<std::size_t>(spec.n / std::max<std::size_t>(spec.m, 1), 4);
    for (std::size_t j = 0; j < spec.m; ++j) {
      Polyhedron P = random_polytope(rng, pts, {c(rng), c(rng), c(rng)}, 30);
      I.hulls[static_cast<int>(j)] = P.vertices;
    }
    for (std::size_t i = 0; i < spec.queries; ++i) I.queries.push_back(random_point(rng, I.box, 100000));
  } else {
    throw std::invalid_argument("generate: unknown kind " + spec.kind);
  }
  return I;
}

}  // namespace leis
