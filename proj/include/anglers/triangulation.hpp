#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "anglers/edge_index.hpp"
#include "anglers/perm4.hpp"

namespace anglers {

class TriangulationError : public std::runtime_error {
 public:
  explicit TriangulationError(const std::string& what) : std::runtime_error(what) {}
};

// One record per unordered pair of hexagonal faces. perm maps vertex i of the
// from-tetrahedron to vertex perm[i] of the to-tetrahedron; in particular
// perm[from_face] == to_face. The inverse gluing is derived, never stored.
struct FaceGluing {
  int from_tet = 0;
  int from_face = 0;
  int to_tet = 0;
  int to_face = 0;
  Perm4 perm;
};

struct Corner {
  int tet = 0;
  int edge = 0;
  int slot() const { return tet * 6 + edge; }
  bool operator==(const Corner&) const = default;
};

struct EdgeClass {
  int id = 0;
  std::vector<Corner> corners;  // sorted by slot
  int valence() const { return static_cast<int>(corners.size()); }
};

struct BoundaryComponent {
  int id = 0;
  long euler_characteristic = 0;
  long vertices = 0, edges = 0, faces = 0;
};

struct BuildOptions {
  bool require_oriented = true;
};

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<int> parent_;
};

}  // namespace detail

struct GluedFace {
  int tet = -1;
  int face = -1;
  Perm4 perm;
  bool exists() const { return tet >= 0; }
};

// Edge-class partition of the 6*tet_count corner slots under the
// identifications induced by an arbitrary (possibly partial) gluing table.
// Class ids are ranks of the minimal contained slot; corners sorted by slot.
inline std::vector<EdgeClass> derive_edge_classes(int tet_count,
                                                  const std::vector<FaceGluing>& gluings) {
  detail::UnionFind uf(tet_count * 6);
  for (const auto& g : gluings) {
    for (int e : edges_of_face(g.from_face)) {
      int e2 = map_edge(g.perm, e);
      uf.unite(g.from_tet * 6 + e, g.to_tet * 6 + e2);
    }
  }
  std::map<int, std::vector<Corner>> orbits;
  for (int t = 0; t < tet_count; ++t)
    for (int e = 0; e < 6; ++e) orbits[uf.find(t * 6 + e)].push_back({t, e});
  std::vector<EdgeClass> classes;
  classes.reserve(orbits.size());
  for (auto& [root, corners] : orbits)
    classes.push_back({static_cast<int>(classes.size()), std::move(corners)});
  return classes;
}

class IdealTriangulation {
 public:
  static IdealTriangulation build(int tet_count, const std::vector<FaceGluing>& gluings,
                                  BuildOptions options = {}) {
    if (tet_count < 1) throw TriangulationError("tet count must be positive");
    IdealTriangulation tri;
    tri.tet_count_ = tet_count;
    tri.gluings_ = gluings;
    tri.glued_.assign(static_cast<std::size_t>(tet_count) * 4, GluedFace{});

    auto face_name = [](int t, int f) {
      return "(" + std::to_string(t) + "," + std::to_string(f) + ")";
    };
    for (const auto& g : gluings) {
      for (auto [t, f] : {std::pair{g.from_tet, g.from_face}, std::pair{g.to_tet, g.to_face}}) {
        if (t < 0 || t >= tet_count || f < 0 || f > 3)
          throw TriangulationError("face reference out of range " + face_name(t, f));
      }
      if (!g.perm.is_valid())
        throw TriangulationError("invalid permutation at " + face_name(g.from_tet, g.from_face));
      if (g.from_tet == g.to_tet && g.from_face == g.to_face)
        throw TriangulationError("face glued to itself " + face_name(g.from_tet, g.from_face));
      if (g.perm[g.from_face] != g.to_face)
        throw TriangulationError("permutation does not map face " +
                                 face_name(g.from_tet, g.from_face) + " onto " +
                                 face_name(g.to_tet, g.to_face));
      if (options.require_oriented && !g.perm.is_odd())
        throw TriangulationError("even permutation at " + face_name(g.from_tet, g.from_face) +
                                 "<->" + face_name(g.to_tet, g.to_face) +
                                 " (orientation requires odd gluings)");
      auto& fwd = tri.glued_[static_cast<std::size_t>(g.from_tet) * 4 + g.from_face];
      auto& bwd = tri.glued_[static_cast<std::size_t>(g.to_tet) * 4 + g.to_face];
      if (fwd.exists())
        throw TriangulationError("duplicate face " + face_name(g.from_tet, g.from_face));
      if (bwd.exists()) throw TriangulationError("duplicate face " + face_name(g.to_tet, g.to_face));
      fwd = {g.to_tet, g.to_face, g.perm};
      bwd = {g.from_tet, g.from_face, g.perm.inverse()};
    }
    for (int t = 0; t < tet_count; ++t)
      for (int f = 0; f < 4; ++f)
        if (!tri.glued_[static_cast<std::size_t>(t) * 4 + f].exists())
          throw TriangulationError("unglued face " + face_name(t, f));

    tri.oriented_ = std::all_of(gluings.begin(), gluings.end(),
                                [](const FaceGluing& g) { return g.perm.is_odd(); });
    tri.edge_classes_ = derive_edge_classes(tet_count, gluings);
    tri.class_of_slot_.assign(static_cast<std::size_t>(tet_count) * 6, -1);
    for (const auto& c : tri.edge_classes_)
      for (const auto& corner : c.corners) tri.class_of_slot_[corner.slot()] = c.id;
    tri.derive_boundary();
    return tri;
  }

  int tet_count() const { return tet_count_; }
  bool oriented() const { return oriented_; }
  const std::vector<FaceGluing>& gluings() const { return gluings_; }
  const std::vector<EdgeClass>& edge_classes() const { return edge_classes_; }
  const std::vector<BoundaryComponent>& boundary_components() const { return boundary_; }

  int edge_class_id(int tet, int edge) const {
    return class_of_slot_[static_cast<std::size_t>(tet) * 6 + edge];
  }
  const EdgeClass& edge_class_of(int tet, int edge) const {
    return edge_classes_[edge_class_id(tet, edge)];
  }
  const GluedFace& glued(int tet, int face) const {
    return glued_[static_cast<std::size_t>(tet) * 4 + face];
  }
  int corner_count() const { return tet_count_ * 6; }

  // Number of boundary 0-cells (edge-end orbits); boundary 1-cells are always
  // 6*tet_count and 2-cells 4*tet_count for a closed-interior gluing.
  long boundary_vertex_count() const {
    long v = 0;
    for (const auto& b : boundary_) v += b.vertices;
    return v;
  }

  // One step of the cyclic link of an edge class.
  struct EdgeWalkStep {
    Corner corner;
    int arrive_face = -1;  // hexagon through which the walk entered this corner
    int depart_face = -1;  // hexagon through which it leaves
  };

  // Walks the link of edge class `class_id` once around, visiting each corner
  // slot exactly once. Throws if the link does not close up coherently.
  std::vector<EdgeWalkStep> edge_class_cycle(int class_id) const {
    const EdgeClass& cls = edge_classes_.at(class_id);
    Corner start = cls.corners.front();
    auto faces0 = faces_of_edge(start.edge);
    std::vector<EdgeWalkStep> walk;
    Corner cur = start;
    int depart = faces0[1];
    for (int step = 0; step < cls.valence(); ++step) {
      const GluedFace& g = glued(cur.tet, depart);
      walk.push_back({cur, -1, depart});
      Corner next{g.tet, map_edge(g.perm, cur.edge)};
      auto nf = faces_of_edge(next.edge);
      int next_depart = (nf[0] == g.face) ? nf[1] : nf[0];
      if (step + 1 == cls.valence() && (!(next == start) || g.face != faces0[0]))
        throw TriangulationError("edge link of class " + std::to_string(class_id) +
                                 " does not close coherently");
      cur = next;
      depart = next_depart;
    }
    // step i arrives through the gluing image of step i-1's departure face
    for (std::size_t i = 0; i < walk.size(); ++i) {
      const auto& prev = walk[i == 0 ? walk.size() - 1 : i - 1];
      walk[i].arrive_face = glued(prev.corner.tet, prev.depart_face).face;
    }
    return walk;
  }

 private:
  void derive_boundary() {
    // Boundary complex of the truncation triangles.
    //   2-cell slots: (t, v)            -> 4T
    //   1-cell slots: (t, v, f), v != f -> 12T, orbits of size 2
    //   0-cell slots: (t, v, e), v in e -> 12T
    const int T = tet_count_;
    auto tri2 = [T](int t, int v) { return t * 4 + v; };
    auto ext1 = [](int t, int v, int f) { return (t * 4 + v) * 4 + f; };
    auto cor0 = [](int t, int v, int e) { return (t * 4 + v) * 6 + e; };

    detail::UnionFind comp(T * 4), cells1(T * 16), cells0(T * 24);
    for (int t = 0; t < T; ++t)
      for (int f = 0; f < 4; ++f) {
        const GluedFace& g = glued(t, f);
        for (int v = 0; v < 4; ++v) {
          if (v == f) continue;
          comp.unite(tri2(t, v), tri2(g.tet, g.perm[v]));
          cells1.unite(ext1(t, v, f), ext1(g.tet, g.perm[v], g.face));
        }
        // 0-cell (t, v, e) -> (t2, p(v), p(e)) for each end v of each edge of f
        for (int e : edges_of_face(f)) {
          int e2 = map_edge(g.perm, e);
          for (int v : {kEdgeVertices[e][0], kEdgeVertices[e][1]})
            cells0.unite(cor0(t, v, e), cor0(g.tet, g.perm[v], e2));
        }
      }

    std::map<int, int> comp_ids;  // root -> dense id in min-slot order
    for (int s = 0; s < T * 4; ++s) {
      int r = comp.find(s);
      if (!comp_ids.count(r)) comp_ids[r] = static_cast<int>(comp_ids.size());
    }
    boundary_.assign(comp_ids.size(), BoundaryComponent{});
    for (auto& [root, id] : comp_ids) boundary_[id].id = id;

    // triangles are never identified with each other; each slot is a 2-cell
    for (int s = 0; s < T * 4; ++s) boundary_[comp_ids[comp.find(s)]].faces += 1;

    for (int t = 0; t < T; ++t)
      for (int v = 0; v < 4; ++v)
        for (int f = 0; f < 4; ++f) {
          if (v == f) continue;
          int s = ext1(t, v, f);
          if (cells1.find(s) == s) boundary_[comp_ids[comp.find(tri2(t, v))]].edges += 1;
        }
    for (int t = 0; t < T; ++t)
      for (int v = 0; v < 4; ++v)
        for (int e : edges_at_vertex(v)) {
          int s = cor0(t, v, e);
          if (cells0.find(s) == s) boundary_[comp_ids[comp.find(tri2(t, v))]].vertices += 1;
        }
    for (auto& b : boundary_)
      b.euler_characteristic = b.vertices - b.edges + b.faces;
  }

  int tet_count_ = 0;
  bool oriented_ = false;
  std::vector<FaceGluing> gluings_;
  std::vector<GluedFace> glued_;
  std::vector<EdgeClass> edge_classes_;
  std::vector<int> class_of_slot_;
  std::vector<BoundaryComponent> boundary_;
};

// ---------------------------------------------------------------------------
// Validation report (never throws; carries failures instead).

struct ValidationReport {
  struct Issue {
    bool failure = false;  // false -> warning
    std::string message;
  };
  bool built = false;
  bool orientable = true;
  std::vector<Issue> issues;
  std::vector<EdgeClass> edge_table;
  std::vector<BoundaryComponent> boundary;

  bool ok() const {
    return built && std::none_of(issues.begin(), issues.end(),
                                 [](const Issue& i) { return i.failure; });
  }
};

inline ValidationReport validate(int tet_count, const std::vector<FaceGluing>& gluings) {
  ValidationReport rep;
  for (const auto& g : gluings)
    if (g.perm.is_valid() && !g.perm.is_odd()) {
      rep.orientable = false;
      rep.issues.push_back({true, "orientability failure: even permutation at (" +
                                      std::to_string(g.from_tet) + "," +
                                      std::to_string(g.from_face) + ")<->(" +
                                      std::to_string(g.to_tet) + "," + std::to_string(g.to_face) +
                                      ")"});
    }
  try {
    IdealTriangulation tri =
        IdealTriangulation::build(tet_count, gluings, {.require_oriented = false});
    rep.built = true;
    rep.edge_table = tri.edge_classes();
    rep.boundary = tri.boundary_components();
    // involution: derived inverse gluings compose to the identity
    for (int t = 0; t < tet_count; ++t)
      for (int f = 0; f < 4; ++f) {
        const auto& g = tri.glued(t, f);
        const auto& h = tri.glued(g.tet, g.face);
        if (h.tet != t || h.face != f || !(g.perm.then(h.perm) == Perm4{}))
          rep.issues.push_back({true, "involution failure at (" + std::to_string(t) + "," +
                                          std::to_string(f) + ")"});
      }
    for (const auto& b : tri.boundary_components()) {
      if (b.euler_characteristic >= 0)
        rep.issues.push_back({false, "scope warning: non-negative boundary Euler characteristic " +
                                         std::to_string(b.euler_characteristic) + " on component " +
                                         std::to_string(b.id)});
      if (b.euler_characteristic % 2 != 0)
        rep.issues.push_back({false, "odd boundary Euler characteristic on component " +
                                         std::to_string(b.id)});
    }
  } catch (const TriangulationError& err) {
    rep.built = false;
    rep.issues.push_back({true, err.what()});
  }
  return rep;
}

inline ValidationReport validate(const IdealTriangulation& tri) {
  return validate(tri.tet_count(), tri.gluings());
}

}  // namespace anglers
