#include <leis/validate.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace leis;

namespace {

struct Options {
  std::string kind = "planes";
  std::string shape = "path";
  std::string variant = "path";
  std::string suite;
  std::string structure = "leis";
  std::string in, out;
  std::uint64_t seed = 1;
  std::size_t n = 100, m = 4, vertices = 8, degree = 3, queries = 0;
  std::size_t k = 4, ell = 0, x = 0, walks = 200, walk_length = 24, seeds = 1;
  double c = 3;
  bool k_given = false;
  std::size_t heavy_stride = 1;
  std::string w1 = "0", w2 = "0";
  std::vector<std::size_t> sweep_n, sweep_m, sweep_len;
};

// Writes to --out when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot write " + path);
    }
  }
  std::ostream& operator()() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

CatalogVariant parse_variant(const std::string& v) {
  if (v == "path") return CatalogVariant::Path;
  if (v == "graph" || v == "general") return CatalogVariant::General;
  throw std::invalid_argument("unknown variant " + v);
}

LeisConfig leis_config(const Options& o) {
  LeisConfig cfg;
  cfg.k = o.k;
  cfg.ell = o.ell;
  cfg.x = o.x;
  cfg.c = o.c;
  return cfg;
}

Instance input(const Options& o) {
  if (!o.in.empty()) return load_instance(o.in);
  InstanceSpec s;
  s.kind = o.kind;
  s.n = o.n;
  s.m = o.m;
  s.vertices = o.vertices;
  s.degree = o.degree;
  s.seed = o.seed;
  s.queries = o.queries;
  s.shape = o.shape == "path"          ? CatalogShape::Path
            : o.shape == "binary-tree" ? CatalogShape::BinaryTree
            : o.shape == "random-degree-3"
                ? CatalogShape::RandomDegree3
                : throw std::invalid_argument("unknown shape " + o.shape);
  return generate_instance(s);
}

std::vector<WeightedPoint> weighted(const Instance& I) {
  std::vector<WeightedPoint> pts;
  for (const auto& p : I.points) pts.push_back({p.p, p.weight.value_or(0), p.id});
  return pts;
}

std::vector<ColoredPoint> colored(const Instance& I, std::size_t& m) {
  std::vector<ColoredPoint> pts;
  m = 0;
  for (const auto& p : I.points) {
    pts.push_back({p.p, p.color.value_or(0), p.id});
    m = std::max<std::size_t>(m, static_cast<std::size_t>(pts.back().color) + 1);
  }
  return pts;
}

void ids(std::ostream& os, const std::vector<int>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
}

std::vector<int> walk_of(const CatalogGraph& G) {
  if (G.variant == CatalogVariant::Path) return G.path_order();
  std::vector<int> all(G.vertex_count());
  std::iota(all.begin(), all.end(), 0);
  return walk_from_subgraph(G, all);
}

int cmd_generate(const Options& o) {
  Sink out(o.out);
  write_instance(out(), input(o));
  return 0;
}

int cmd_build(const Options& o) {
  Instance I = input(o);
  Sink out(o.out);
  if (I.kind == "planes") {
    auto C = build_shallow_cutting(I.planes, o.k, I.box);
    write_cutting(out(), C, I.seed);
  } else if (I.kind == "catalog") {
    auto idx = build_leis(I.catalog(), leis_config(o));
    out() << "# leis-space v1\n" << LeisSpaceReport::csv_header() << "\n" << idx.space.csv_row() << "\n";
  } else if (I.kind == "polytopes") {
    auto S = I.polytopes();
    auto st = overlay_stats(S);
    out() << "# overlay-stats v1\nm,n,v1,v2,v3,total\n"
          << st.m << ',' << st.n << ',' << st.v1 << ',' << st.v2 << ',' << st.v3 << ',' << st.total() << "\n";
  } else if (I.kind == "weighted-points") {
    auto T = build_weighted_tree(weighted(I), leis_config(o));
    out() << "# weighted-tree v1\npoints,height,max_index_triangles,report_index_triangles\n"
          << T.points.size() << ',' << T.tree.height << ',' << T.max_index.space.primary_triangles << ','
          << T.report_index.space.primary_triangles << "\n";
  } else if (I.kind == "colored-points") {
    std::size_t m;
    auto pts = colored(I, m);
    auto C = build_colored(pts, m, leis_config(o));
    out() << "# colored-catalog v1\npoints,colors,path_triangles,tree_triangles\n"
          << pts.size() << ',' << m << ',' << C.path_index.space.primary_triangles << ','
          << C.tree_index.space.primary_triangles << "\n";
  } else {
    throw std::invalid_argument("build: unsupported kind " + I.kind);
  }
  return 0;
}

int cmd_query(const Options& o) {
  Instance I = input(o);
  Sink sink(o.out);
  auto& out = sink();
  if (I.kind == "planes") {
    auto C = build_shallow_cutting(I.planes, o.k, I.box);
    out << "# cutting-query v1\nquery,above_k_level,prism,conflicts\n";
    for (std::size_t i = 0; i < I.queries.size(); ++i) {
      auto t = C.locate_prism(I.queries[i]);
      out << i << ',' << !t << ',' << (t ? *t : -1) << ',';
      if (t) ids(out, C.conflicts[*t]);
      out << "\n";
    }
  } else if (I.kind == "catalog") {
    auto G = I.catalog();
    auto idx = build_leis(G, leis_config(o));
    auto walk = walk_of(G);
    out << "# leis-query v1\nquery,step,vertex,above_k_level,lists,ids\n";
    for (std::size_t i = 0; i < I.queries.size(); ++i) {
      auto [s, a] = open_session(idx, I.queries[i], walk[0]);
      for (std::size_t j = 0; j < walk.size(); ++j) {
        if (j) a = advance_session(s, walk[j]);
        out << i << ',' << j << ',' << walk[j] << ',' << a.above_k_level << ',' << a.lists.size() << ',';
        if (!a.above_k_level) ids(out, a.merged());
        out << "\n";
      }
    }
  } else if (I.kind == "polytopes") {
    auto S = I.polytopes();
    auto idx = build_overlay_index(S, I.box);
    out << "# overlay-query v1\nquery,anchor,steps,members\n";
    for (std::size_t i = 0; i < I.queries.size(); ++i) {
      auto r = idx.locate_anchor(I.queries[i]);
      out << i << ',' << r.anchor << ',' << r.steps << ',' << r.members << "\n";
    }
  } else if (I.kind == "weighted-points") {
    auto T = build_weighted_tree(weighted(I), leis_config(o));
    Scalar w1 = parse_scalar(o.w1), w2 = parse_scalar(o.w2);
    out << "# weighted-query v1\nquery,max_id,descent,reported\n";
    for (std::size_t i = 0; i < I.queries.size(); ++i) {
      const auto& d = I.queries[i];
      LowerHalfspace h{d.x, d.y, d.z};
      auto mx = query_max(T, h);
      out << i << ',' << (mx.id ? *mx.id : -1) << ',' << mx.descent << ',';
      if (w1 <= w2) ids(out, query_weighted_report(T, h, w1, w2).ids);
      out << "\n";
    }
  } else if (I.kind == "colored-points") {
    std::size_t m;
    auto pts = colored(I, m);
    auto C = build_colored(pts, m, leis_config(o));
    auto v = o.variant == "path" ? ColorVariant::Path : ColorVariant::Tree;
    out << "# colored-query v1\nquery,visited,colors\n";
    for (std::size_t i = 0; i < I.queries.size(); ++i) {
      const auto& d = I.queries[i];
      auto r = query_colors(C, {d.x, d.y, d.z}, v);
      out << i << ',' << r.visited << ',';
      ids(out, r.colors);
      out << "\n";
    }
  } else {
    throw std::invalid_argument("query: unsupported kind " + I.kind);
  }
  return 0;
}

int cmd_validate(const Options& o) {
  std::vector<ValidationReport> reports;
  for (std::size_t s = 0; s < o.seeds; ++s) {
    Options p = o;
    p.seed = o.seed + s;
    if (o.suite == "apps") {
      reports.push_back(validate_apps(p.seed, std::max<std::size_t>(p.n, 8), std::max<std::size_t>(p.queries, 1),
                                      std::max<std::size_t>(p.m, 1), leis_config(p)));
      continue;
    }
    if (o.suite == "cutting") {
      p.kind = "planes";
    } else if (o.suite == "overlay" || o.suite == "rdk") {
      p.kind = "polytopes";
    } else if (o.suite == "leis") {
      p.kind = "catalog";
    } else {
      throw std::invalid_argument("unknown suite " + o.suite);
    }
    if (p.queries == 0) p.queries = 200;
    Instance I = input(p);
    if (I.kind != p.kind) throw std::invalid_argument("suite " + o.suite + " needs a " + p.kind + " instance");
    if (o.suite == "cutting") {
      reports.push_back(validate_cutting(I.planes, p.k, I.box, I.queries));
    } else if (o.suite == "overlay") {
      reports.push_back(validate_overlay(I.polytopes(), I.box, I.queries));
    } else if (o.suite == "rdk") {
      RdkConfig cfg;
      cfg.seed = p.seed;
      reports.push_back(validate_rdk(I.polytopes(), I.box, cfg, I.queries));
    } else {
      auto idx = build_leis(I.catalog(), leis_config(p));
      reports.push_back(validate_leis(idx, p.seed, p.walks, p.walk_length));
    }
  }
  Sink out(o.out);
  bool pass = true;
  for (const auto& r : reports) {
    r.print(out());
    pass &= r.pass();
  }
  return pass ? 0 : 1;
}

int cmd_bench(const Options& o) {
  Sink sink(o.out);
  auto& out = sink();
  auto ns = o.sweep_n.empty() ? std::vector<std::size_t>{o.n} : o.sweep_n;
  if (o.structure == "leis") {
    auto lens = o.sweep_len.empty() ? std::vector<std::size_t>{o.walk_length} : o.sweep_len;
    out << BenchRecord::csv_header() << "\n";
    for (std::size_t n : ns)
      for (std::size_t L : lens)
        for (std::size_t s = 0; s < o.seeds; ++s) {
          BenchParams p;
          p.variant = parse_variant(o.variant);
          p.n = n;
          p.vertices = o.vertices;
          p.k = o.k_given ? o.k : 0;
          p.x = o.x;
          p.ell = o.ell ? o.ell : 4;
          p.c = o.c;
          p.walks = o.walks;
          p.walk_length = L;
          p.heavy_stride = o.heavy_stride;
          p.seed = o.seed + s;
          out << bench_leis(p).csv_row() << "\n";
        }
  } else if (o.structure == "overlay") {
    auto ms = o.sweep_m.empty() ? std::vector<std::size_t>{o.m} : o.sweep_m;
    out << "# overlay-stats v1\nseed,m,n,v1,v2,v3,total\n";
    for (std::size_t n : ns)
      for (std::size_t m : ms)
        for (std::size_t s = 0; s < o.seeds; ++s) {
          Rng rng(o.seed + s);
          std::vector<Polyhedron> S;
          std::uniform_int_distribution<long> c(-20, 20);
          for (std::size_t j = 0; j < m; ++j)
            S.push_back(random_polytope(rng, std::max<std::size_t>(n / m, 4), {c(rng), c(rng), c(rng)}, 30));
          auto st = overlay_stats(S);
          out << o.seed + s << ',' << st.m << ',' << st.n << ',' << st.v1 << ',' << st.v2 << ',' << st.v3 << ','
              << st.total() << "\n";
        }
  } else if (o.structure == "rdk") {
    out << "# rdk-hierarchy v1\n" << HierarchyReport::csv_header() << "\n";
    for (std::size_t n : ns)
      for (std::size_t s = 0; s < o.seeds; ++s) {
        InstanceSpec spec;
        spec.kind = "polytopes";
        spec.n = n;
        spec.m = o.m;
        spec.seed = o.seed + s;
        Instance I = generate_instance(spec);
        RdkConfig cfg;
        cfg.seed = spec.seed;
        out << validate_hierarchy(build_cascade(I.polytopes(), I.box, cfg)).csv_row(spec.seed) << "\n";
      }
  } else if (o.structure == "cutting") {
    out << "# cutting-bench v1\nseed,n,k,triangles,max_list,list_total,pass\n";
    for (std::size_t n : ns)
      for (std::size_t s = 0; s < o.seeds; ++s) {
        Rng rng(o.seed + s);
        auto H = random_planes(rng, n);
        auto C = build_shallow_cutting(H, o.k, default_box());
        std::size_t mx = 0, total = 0;
        for (const auto& L : C.conflicts) {
          mx = std::max(mx, L.size());
          total += L.size();
        }
        out << o.seed + s << ',' << n << ',' << o.k << ',' << C.size() << ',' << mx << ',' << total << ','
            << verify_cutting(C, H, o.k, default_box()).pass << "\n";
      }
  } else {
    throw std::invalid_argument("unknown structure " + o.structure);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lower-envelope iterated search: generation, validation and counted benchmarks"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* c) {
    c->add_option("--seed", o.seed, "RNG seed");
    c->add_option("--n", o.n, "planes, points or total polytope vertices");
    c->add_option("--m", o.m, "colors or polytopes");
    c->add_option("--k", o.k, "level parameter");
    c->add_option("--ell", o.ell, "neighborhood radius (0 = default)");
    c->add_option("--c", o.c, "heaviness exponent");
    c->add_option("--x", o.x, "heavy threshold (0 = default)");
    c->add_option("--variant", o.variant, "path | graph (colored queries: path | tree)");
    c->add_option("--in", o.in, "instance file (default: generate from the flags)");
    c->add_option("--out", o.out, "output file (default: stdout)");
    c->add_option("--kind", o.kind, "planes | weighted-points | colored-points | catalog | polytopes");
    c->add_option("--shape", o.shape, "path | binary-tree | random-degree-3");
    c->add_option("--vertices", o.vertices, "catalog vertices");
    c->add_option("--degree", o.degree, "catalog degree bound");
    c->add_option("--queries", o.queries, "query records to generate");
  };

  auto* gen = app.add_subcommand("generate", "write a seeded instance file");
  common(gen);
  auto* build = app.add_subcommand("build", "build the structure for an instance and report its size");
  common(build);
  auto* query = app.add_subcommand("query", "answer the instance's query records");
  common(query);
  query->add_option("--w1", o.w1, "weight interval start (weighted report)");
  query->add_option("--w2", o.w2, "weight interval end (weighted report)");
  auto* val = app.add_subcommand("validate", "run an oracle-backed suite; nonzero exit on any failure");
  common(val);
  val->add_option("--suite", o.suite, "cutting | overlay | rdk | leis | apps")->required();
  val->add_option("--seeds", o.seeds, "consecutive seeds starting at --seed");
  val->add_option("--walks", o.walks, "random walks (leis)");
  val->add_option("--walk-length", o.walk_length, "walk length (leis)");
  auto* bench = app.add_subcommand("bench", "counted-operation sweep as CSV");
  common(bench);
  bench->add_option("--structure", o.structure, "leis | overlay | rdk | cutting");
  bench->add_option("--walk-length", o.walk_length, "walk length (leis)");
  bench->add_option("--sweep-n", o.sweep_n, "values of n")->delimiter(',');
  bench->add_option("--sweep-m", o.sweep_m, "values of m (overlay)")->delimiter(',');
  bench->add_option("--sweep-length", o.sweep_len, "walk lengths (leis)")->delimiter(',');
  bench->add_option("--seeds", o.seeds, "seeds per sweep point");
  bench->add_option("--walks", o.walks, "walks per row (leis)");
  bench->add_option("--heavy-stride", o.heavy_stride, "every stride-th vertex heavy (leis)");

  CLI11_PARSE(app, argc, argv);
  o.k_given = bench->count("--k") > 0;
  try {
    if (*gen) return cmd_generate(o);
    if (*build) return cmd_build(o);
    if (*query) return cmd_query(o);
    if (*val) return cmd_validate(o);
    if (*bench) return cmd_bench(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
