#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "anglers/angles.hpp"
#include "anglers/triangulation.hpp"

namespace anglers {

class SurfaceEncodingError : public std::runtime_error {
 public:
  explicit SurfaceEncodingError(const std::string& what) : std::runtime_error(what) {}
};

// 0-cell of the induced cell decomposition, inside one tetrahedron.
// Internal corners sit on an edge (one point of Sigma cap e); external corners
// sit on an external edge, named by the (vertex, face) pair of the truncation
// triangle and hexagonal face meeting it.
struct SurfaceCorner {
  enum class Kind { internal, external };
  Kind kind = Kind::internal;
  int edge = -1;    // internal
  int vertex = -1;  // external
  int face = -1;    // external

  static SurfaceCorner internal(int edge) { return {Kind::internal, edge, -1, -1}; }
  static SurfaceCorner external(int vertex, int face) {
    return {Kind::external, -1, vertex, face};
  }
  bool is_internal() const { return kind == Kind::internal; }
  bool operator==(const SurfaceCorner&) const = default;
};

struct AdmissibleDisk {
  int tet = 0;
  std::vector<SurfaceCorner> corners;  // cyclic
  int sides() const { return static_cast<int>(corners.size()); }
};

// Unordered matching of boundary side slots. Side i of a disk joins corner i
// to corner i+1 (cyclically); glued sides identify their endpoints with
// reversed orientation.
struct SidePairing {
  int disk_a = 0, side_a = 0, disk_b = 0, side_b = 0;
};

struct SurfaceComplex {
  std::vector<AdmissibleDisk> disks;
  std::vector<SidePairing> pairings;
};

enum class DiskType { I, II, III, IV, other };

inline std::string disk_type_name(DiskType t) {
  switch (t) {
    case DiskType::I: return "I";
    case DiskType::II: return "II";
    case DiskType::III: return "III";
    case DiskType::IV: return "IV";
    default: return "other";
  }
}

// Classification by corner counts (the arithmetic in Lemma 3.2 only needs
// these): I = triangle of internal corners, II = internal quad, III = quad
// with two internal and two external corners, IV = quad of external corners.
inline DiskType classify_disk(const AdmissibleDisk& d) {
  int internal = 0, external = 0;
  for (const auto& c : d.corners) (c.is_internal() ? internal : external) += 1;
  if (internal == 3 && external == 0) return DiskType::I;
  if (internal == 4 && external == 0) return DiskType::II;
  if (internal == 2 && external == 2 && d.sides() == 4) return DiskType::III;
  if (internal == 0 && external == 4) return DiskType::IV;
  return DiskType::other;
}

// --------------------------------------------------------------------------
// Derived side/0-cell structure against a triangulation.

struct SurfaceSide {
  enum class Cell { hexagon, triangle };
  Cell cell_kind = Cell::hexagon;
  int cell = -1;     // face index (hexagon) or vertex index (triangle)
  int pairing = -1;  // index into pairings, -1 if boundary side
};

struct DerivedSurface {
  std::vector<int> corner_offset;            // disk -> first flat corner slot
  int corner_total = 0;
  std::vector<std::vector<SurfaceSide>> sides;  // [disk][side]
  std::vector<int> orbit_of_corner;          // flat slot -> 0-cell orbit
  int orbit_count = 0;
  std::vector<std::vector<std::pair<int, int>>> orbit_members;  // orbit -> (disk, corner)
  std::vector<bool> orbit_internal;
  int unpaired_sides = 0;
  bool closed() const { return unpaired_sides == 0; }

  int slot(int disk, int corner) const { return corner_offset[disk] + corner; }
};

namespace detail {

inline void check_corner_refs(const IdealTriangulation& tri, const SurfaceComplex& s) {
  for (std::size_t d = 0; d < s.disks.size(); ++d) {
    const auto& disk = s.disks[d];
    if (disk.tet < 0 || disk.tet >= tri.tet_count())
      throw SurfaceEncodingError("disk " + std::to_string(d) + " references missing tetrahedron");
    for (const auto& c : disk.corners) {
      if (c.is_internal()) {
        if (c.edge < 0 || c.edge > 5)
          throw SurfaceEncodingError("disk " + std::to_string(d) + " has invalid edge index");
      } else {
        if (c.vertex < 0 || c.vertex > 3 || c.face < 0 || c.face > 3 || c.vertex == c.face)
          throw SurfaceEncodingError("disk " + std::to_string(d) +
                                     " has invalid external edge (vertex,face)");
      }
    }
  }
}

// The unique 2-cell of the truncated boundary crossed by a side between two
// corners; throws when no 2-cell contains both corner 1-cells.
inline SurfaceSide side_cell(const AdmissibleDisk& disk, int i, int j) {
  const SurfaceCorner& x = disk.corners[i];
  const SurfaceCorner& y = disk.corners[j];
  SurfaceSide out;
  if (x.is_internal() && y.is_internal()) {
    if (x.edge == y.edge) {
      // same 1-cell; report through the admissibility checker, pick either face
      out.cell_kind = SurfaceSide::Cell::hexagon;
      out.cell = faces_of_edge(x.edge)[0];
      return out;
    }
    int common = -1;
    for (int f : faces_of_edge(x.edge))
      if (!edge_has_vertex(y.edge, f)) {
        // face f avoids the vertices of x.edge by construction; it contains
        // y.edge iff it is not one of y.edge's vertices
        if (f != kEdgeVertices[y.edge][0] && f != kEdgeVertices[y.edge][1]) common = f;
      }
    if (common < 0)
      throw SurfaceEncodingError("side between opposite edges has no common face");
    out.cell_kind = SurfaceSide::Cell::hexagon;
    out.cell = common;
    return out;
  }
  if (!x.is_internal() && !y.is_internal()) {
    if (x.vertex == y.vertex && x.face == y.face) {
      out.cell_kind = SurfaceSide::Cell::triangle;  // same 1-cell; flagged later
      out.cell = x.vertex;
      return out;
    }
    if (x.face == y.face) {
      out.cell_kind = SurfaceSide::Cell::hexagon;
      out.cell = x.face;
      return out;
    }
    if (x.vertex == y.vertex) {
      out.cell_kind = SurfaceSide::Cell::triangle;
      out.cell = x.vertex;
      return out;
    }
    throw SurfaceEncodingError("external corners share no face or truncation triangle");
  }
  const SurfaceCorner& ext = x.is_internal() ? y : x;
  const SurfaceCorner& in = x.is_internal() ? x : y;
  if (edge_has_vertex(in.edge, ext.face))
    throw SurfaceEncodingError("internal corner's edge does not lie on the external corner's face");
  out.cell_kind = SurfaceSide::Cell::hexagon;
  out.cell = ext.face;
  return out;
}

}  // namespace detail

// Derives side cells and 0-cell orbits. When check_gluings is set, every
// hexagon-side pairing must be compatible with the triangulation's face
// gluings and triangle sides must stay unpaired (their arcs lie on the
// manifold boundary).
inline DerivedSurface derive_surface(const IdealTriangulation& tri, const SurfaceComplex& s,
                                     bool check_gluings = true) {
  detail::check_corner_refs(tri, s);
  DerivedSurface out;
  out.corner_offset.resize(s.disks.size());
  for (std::size_t d = 0; d < s.disks.size(); ++d) {
    out.corner_offset[d] = out.corner_total;
    if (s.disks[d].corners.empty()) {
      out.sides.emplace_back();
      continue;  // admissibility condition (1) violation, reported elsewhere
    }
    out.corner_total += s.disks[d].sides();
    std::vector<SurfaceSide> sides;
    for (int i = 0; i < s.disks[d].sides(); ++i)
      sides.push_back(detail::side_cell(s.disks[d], i, (i + 1) % s.disks[d].sides()));
    out.sides.push_back(std::move(sides));
  }

  // attach pairings
  for (std::size_t pi = 0; pi < s.pairings.size(); ++pi) {
    const auto& pr = s.pairings[pi];
    auto valid_side = [&](int d, int i) {
      return d >= 0 && d < static_cast<int>(s.disks.size()) && i >= 0 && i < s.disks[d].sides();
    };
    if (!valid_side(pr.disk_a, pr.side_a) || !valid_side(pr.disk_b, pr.side_b))
      throw SurfaceEncodingError("pairing " + std::to_string(pi) + " references missing side");
    if (pr.disk_a == pr.disk_b && pr.side_a == pr.side_b)
      throw SurfaceEncodingError("pairing " + std::to_string(pi) + " glues a side to itself");
    for (auto [d, i] : {std::pair{pr.disk_a, pr.side_a}, std::pair{pr.disk_b, pr.side_b}}) {
      if (out.sides[d][i].pairing >= 0)
        throw SurfaceEncodingError("side (" + std::to_string(d) + "," + std::to_string(i) +
                                   ") appears in two pairings");
      out.sides[d][i].pairing = static_cast<int>(pi);
    }
  }
  for (const auto& disk_sides : out.sides)
    for (const auto& side : disk_sides)
      if (side.pairing < 0) ++out.unpaired_sides;

  if (check_gluings) {
    for (std::size_t pi = 0; pi < s.pairings.size(); ++pi) {
      const auto& pr = s.pairings[pi];
      const auto& sa = out.sides[pr.disk_a][pr.side_a];
      const auto& sb = out.sides[pr.disk_b][pr.side_b];
      if (sa.cell_kind != SurfaceSide::Cell::hexagon || sb.cell_kind != SurfaceSide::Cell::hexagon)
        throw SurfaceEncodingError("pairing " + std::to_string(pi) +
                                   " glues an external-face arc; those lie on the boundary");
      int ta = s.disks[pr.disk_a].tet, tb = s.disks[pr.disk_b].tet;
      const GluedFace& g = tri.glued(ta, sa.cell);
      if (g.tet != tb || g.face != sb.cell)
        throw SurfaceEncodingError("pairing " + std::to_string(pi) +
                                   " is not carried by a face gluing of the triangulation");
      // endpoint corners must match under the gluing permutation, reversed
      const auto& da = s.disks[pr.disk_a];
      const auto& db = s.disks[pr.disk_b];
      auto image = [&](const SurfaceCorner& c) {
        if (c.is_internal()) return SurfaceCorner::internal(map_edge(g.perm, c.edge));
        return SurfaceCorner::external(g.perm[c.vertex], g.face);
      };
      SurfaceCorner a0 = da.corners[pr.side_a];
      SurfaceCorner a1 = da.corners[(pr.side_a + 1) % da.sides()];
      SurfaceCorner b0 = db.corners[pr.side_b];
      SurfaceCorner b1 = db.corners[(pr.side_b + 1) % db.sides()];
      if (!(image(a0) == b1 && image(a1) == b0))
        throw SurfaceEncodingError("pairing " + std::to_string(pi) +
                                   " endpoints do not match under the face gluing");
    }
  }

  // 0-cell orbits: union-find over corner slots, joining paired endpoints
  detail::UnionFind uf(out.corner_total);
  for (const auto& pr : s.pairings) {
    const auto& da = s.disks[pr.disk_a];
    const auto& db = s.disks[pr.disk_b];
    int a0 = out.slot(pr.disk_a, pr.side_a);
    int a1 = out.slot(pr.disk_a, (pr.side_a + 1) % da.sides());
    int b0 = out.slot(pr.disk_b, pr.side_b);
    int b1 = out.slot(pr.disk_b, (pr.side_b + 1) % db.sides());
    uf.unite(a0, b1);
    uf.unite(a1, b0);
  }
  std::map<int, int> orbit_ids;
  out.orbit_of_corner.assign(out.corner_total, -1);
  for (std::size_t d = 0; d < s.disks.size(); ++d)
    for (int i = 0; i < s.disks[d].sides(); ++i) {
      int root = uf.find(out.slot(static_cast<int>(d), i));
      auto [it, inserted] = orbit_ids.try_emplace(root, static_cast<int>(orbit_ids.size()));
      int oid = it->second;
      out.orbit_of_corner[out.slot(static_cast<int>(d), i)] = oid;
      if (inserted) {
        out.orbit_members.emplace_back();
        out.orbit_internal.push_back(true);
      }
      out.orbit_members[oid].push_back({static_cast<int>(d), i});
      if (!s.disks[d].corners[i].is_internal()) out.orbit_internal[oid] = false;
    }
  out.orbit_count = static_cast<int>(orbit_ids.size());

  // internal orbits must reference a single edge class
  for (int o = 0; o < out.orbit_count; ++o) {
    if (!out.orbit_internal[o]) continue;
    int cls = -1;
    for (auto [d, i] : out.orbit_members[o]) {
      const auto& c = s.disks[d].corners[i];
      int cid = tri.edge_class_id(s.disks[d].tet, c.edge);
      if (cls < 0) cls = cid;
      if (cls != cid)
        throw SurfaceEncodingError("internal 0-cell references two different edge classes");
    }
  }
  return out;
}

// --------------------------------------------------------------------------
// Admissibility (the encodable parts of conditions (1)-(3)).

struct AdmissibilityReport {
  bool pass = true;
  std::vector<std::string> violations;
  void fail(const std::string& msg) {
    pass = false;
    violations.push_back(msg);
  }
};

inline AdmissibilityReport check_admissibility(const IdealTriangulation& tri,
                                               const SurfaceComplex& s) {
  detail::check_corner_refs(tri, s);
  AdmissibilityReport rep;
  for (std::size_t d = 0; d < s.disks.size(); ++d) {
    const auto& disk = s.disks[d];
    if (disk.corners.empty()) {
      rep.fail("disk " + std::to_string(d) +
               ": boundary circle misses the 1-skeleton (condition 1)");
      continue;
    }
    for (int i = 0; i < disk.sides(); ++i) {
      const auto& x = disk.corners[i];
      const auto& y = disk.corners[(i + 1) % disk.sides()];
      std::string where = "disk " + std::to_string(d) + " side " + std::to_string(i);
      if (x == y && disk.sides() > 1) {
        rep.fail(where + ": endpoints on the same 1-cell");
        continue;
      }
      if (disk.sides() == 1) {
        rep.fail(where + ": monogon side returns to its own 1-cell");
        continue;
      }
      if (x.is_internal() && y.is_internal()) {
        if (x.edge == y.edge)
          rep.fail(where + ": arc through a face with both endpoints on edge " +
                   std::to_string(x.edge) + " (condition 2)");
        // distinct edges of a common hexagon are never adjacent in its
        // boundary circle; side_cell throws if no common face exists
        try {
          detail::side_cell(disk, i, (i + 1) % disk.sides());
        } catch (const SurfaceEncodingError& e) {
          rep.fail(where + ": " + e.what());
        }
      } else if (!x.is_internal() && !y.is_internal()) {
        if (x.vertex == y.vertex && x.face == y.face)
          rep.fail(where + ": arc with both endpoints on the same external edge (condition 3)");
        else if (x.vertex != y.vertex && x.face != y.face)
          rep.fail(where + ": external corners share no 2-cell");
      } else {
        const auto& ext = x.is_internal() ? y : x;
        const auto& in = x.is_internal() ? x : y;
        if (edge_has_vertex(in.edge, ext.face))
          rep.fail(where + ": internal edge does not lie on the crossed face");
        else if (edge_has_vertex(in.edge, ext.vertex))
          rep.fail(where + ": arc endpoints on adjacent 1-cells (condition 2)");
      }
    }
  }
  return rep;
}

// --------------------------------------------------------------------------
// Inner angles theta: alpha(e, sigma) at internal corners, pi/2 at external
// corners. Rational mode works in units of pi (pi/2 = 1/2) and is exact.

template <class S>
struct InnerAnglesT {
  std::vector<std::vector<S>> theta;  // [disk][corner]
};

namespace detail {

template <class S>
InnerAnglesT<S> inner_angles_impl(const IdealTriangulation& tri, const SurfaceComplex& s,
                                  const AngleAssignment& alpha) {
  using tr = angle_scalar<S>;
  InnerAnglesT<S> out;
  out.theta.resize(s.disks.size());
  for (std::size_t d = 0; d < s.disks.size(); ++d) {
    const auto& disk = s.disks[d];
    for (const auto& c : disk.corners) {
      if (c.is_internal())
        out.theta[d].push_back(tr::get(alpha, disk.tet * 6 + c.edge));
      else
        out.theta[d].push_back(tr::pi() / S(2));
    }
  }
  return out;
}

}  // namespace detail

inline InnerAnglesT<Rational> inner_angles(const IdealTriangulation& tri, const SurfaceComplex& s,
                                           const AngleAssignment& alpha) {
  if (!alpha.exact_mode()) throw std::logic_error("exact inner angles need rational-pi mode");
  detail::check_corner_refs(tri, s);
  return detail::inner_angles_impl<Rational>(tri, s, alpha);
}

inline InnerAnglesT<double> inner_angles_float(const IdealTriangulation& tri,
                                               const SurfaceComplex& s,
                                               const AngleAssignment& alpha) {
  detail::check_corner_refs(tri, s);
  if (alpha.exact_mode()) {
    auto exact = detail::inner_angles_impl<Rational>(tri, s, alpha);
    InnerAnglesT<double> out;
    out.theta.resize(exact.theta.size());
    for (std::size_t d = 0; d < exact.theta.size(); ++d)
      for (const auto& v : exact.theta[d]) out.theta[d].push_back(to_double(v) * kPi);
    return out;
  }
  return detail::inner_angles_impl<double>(tri, s, alpha);
}

// --------------------------------------------------------------------------
// Lemma 3.2: (a) internal 0-cell sums are 2 pi, (b) disk sums are at most
// (k-2) pi, (c) with equality exactly for type IV disks.

struct Lemma32Report {
  bool pass = true;
  std::vector<std::string> failures;
  std::vector<Rational> disk_margin_pi_units;  // (k-2) - sum(theta)/pi per disk
  void fail(const std::string& m) {
    pass = false;
    failures.push_back(m);
  }
};

inline Lemma32Report lemma_3_2_check(const IdealTriangulation& tri, const SurfaceComplex& s,
                                     const InnerAnglesT<Rational>& th) {
  Lemma32Report rep;
  DerivedSurface der = derive_surface(tri, s, false);
  for (int o = 0; o < der.orbit_count; ++o) {
    if (!der.orbit_internal[o]) continue;
    Rational sum = 0;
    for (auto [d, i] : der.orbit_members[o]) sum += th.theta[d][i];
    if (sum != 2)
      rep.fail("internal 0-cell " + std::to_string(o) + " has angle sum " + format_rational(sum) +
               " pi != 2 pi");
  }
  for (std::size_t d = 0; d < s.disks.size(); ++d) {
    Rational sum = 0;
    for (const auto& v : th.theta[d]) sum += v;
    Rational bound = Rational(s.disks[d].sides() - 2);
    rep.disk_margin_pi_units.push_back(bound - sum);
    DiskType type = classify_disk(s.disks[d]);
    if (sum > bound)
      rep.fail("disk " + std::to_string(d) + " violates the (k-2) pi bound");
    if (sum == bound && type != DiskType::IV)
      rep.fail("disk " + std::to_string(d) + " attains equality but is type " +
               disk_type_name(type));
    if (type == DiskType::IV && sum != bound)
      rep.fail("type IV disk " + std::to_string(d) + " misses the equality");
  }
  return rep;
}

// --------------------------------------------------------------------------
// Euler characteristics, combinatorial and via the inner-angle formula; the
// doubling construction handles surfaces with boundary on dM.

struct EulerResult {
  long chi_combinatorial = 0;
  Rational chi_angle;  // exact in rational mode
  bool closed = false;
  long cells0 = 0, cells1 = 0, cells2 = 0;
};

namespace detail {

inline Rational chi_angle_closed(const SurfaceComplex& s, const InnerAnglesT<Rational>& th) {
  // 2 pi chi = sum over disks of (sum theta - (k-2) pi), in units of pi
  Rational acc = 0;
  for (std::size_t d = 0; d < s.disks.size(); ++d) {
    Rational sum = 0;
    for (const auto& v : th.theta[d]) sum += v;
    acc += sum - Rational(s.disks[d].sides() - 2);
  }
  return acc / 2;
}

}  // namespace detail

inline EulerResult euler_characteristics(const IdealTriangulation& tri, const SurfaceComplex& s,
                                         const InnerAnglesT<Rational>& th) {
  DerivedSurface der = derive_surface(tri, s, false);
  EulerResult out;
  out.closed = der.closed();
  out.cells0 = der.orbit_count;
  out.cells1 = static_cast<long>(s.pairings.size()) + der.unpaired_sides;
  out.cells2 = static_cast<long>(s.disks.size());
  out.chi_combinatorial = out.cells0 - out.cells1 + out.cells2;

  if (out.closed) {
    out.chi_angle = detail::chi_angle_closed(s, th);
    return out;
  }
  // double along the boundary: two copies, mirror-pair every unpaired side
  SurfaceComplex dbl;
  const int n = static_cast<int>(s.disks.size());
  dbl.disks = s.disks;
  dbl.disks.insert(dbl.disks.end(), s.disks.begin(), s.disks.end());
  for (const auto& pr : s.pairings) {
    dbl.pairings.push_back(pr);
    dbl.pairings.push_back({pr.disk_a + n, pr.side_a, pr.disk_b + n, pr.side_b});
  }
  for (std::size_t d = 0; d < s.disks.size(); ++d)
    for (int i = 0; i < s.disks[d].sides(); ++i)
      if (der.sides[d][i].pairing < 0)
        dbl.pairings.push_back({static_cast<int>(d), i, static_cast<int>(d) + n, i});
  InnerAnglesT<Rational> th2;
  th2.theta = th.theta;
  th2.theta.insert(th2.theta.end(), th.theta.begin(), th.theta.end());
  out.chi_angle = detail::chi_angle_closed(dbl, th2) / 2;
  return out;
}

// --------------------------------------------------------------------------
// Proposition 3.3 verdict.

struct Prop33Report {
  bool consistent = false;    // chi_angle == chi_combinatorial
  bool nonpositive = false;   // chi <= 0
  bool equality = false;      // chi == 0
  bool all_type_iv = false;
  bool is_edge_tube = false;  // equality attained by an all-type-IV surface
  long chi = 0;
  Rational chi_angle;
  std::vector<int> non_type_iv_disks;
  std::vector<std::string> failures;
  bool pass() const { return consistent && nonpositive && failures.empty(); }
};

inline Prop33Report prop_3_3_verdict(const IdealTriangulation& tri, const SurfaceComplex& s,
                                     const InnerAnglesT<Rational>& th) {
  Prop33Report rep;
  EulerResult euler = euler_characteristics(tri, s, th);
  rep.chi = euler.chi_combinatorial;
  rep.chi_angle = euler.chi_angle;
  rep.consistent = (euler.chi_angle == Rational(euler.chi_combinatorial));
  if (!rep.consistent)
    rep.failures.push_back("chi_angle = " + format_rational(euler.chi_angle) +
                           " differs from chi_combinatorial = " +
                           std::to_string(euler.chi_combinatorial) +
                           " (inconsistent encoding)");
  rep.nonpositive = euler.chi_combinatorial <= 0;
  if (!rep.nonpositive) rep.failures.push_back("positive Euler characteristic");
  rep.equality = euler.chi_combinatorial == 0;
  rep.all_type_iv = true;
  for (std::size_t d = 0; d < s.disks.size(); ++d)
    if (classify_disk(s.disks[d]) != DiskType::IV) {
      rep.all_type_iv = false;
      rep.non_type_iv_disks.push_back(static_cast<int>(d));
    }
  if (rep.equality != rep.all_type_iv && rep.consistent)
    rep.failures.push_back(rep.equality
                               ? "chi = 0 but the surface has non-type-IV disks"
                               : "all disks are type IV but chi != 0");
  rep.is_edge_tube = rep.equality && rep.all_type_iv;
  // external 0-cells of a coherent bounded surface carry exactly two corners
  DerivedSurface der = derive_surface(tri, s, false);
  for (int o = 0; o < der.orbit_count; ++o)
    if (!der.orbit_internal[o] && der.orbit_members[o].size() != 2)
      rep.failures.push_back("external 0-cell " + std::to_string(o) + " has " +
                             std::to_string(der.orbit_members[o].size()) + " corners, expected 2");
  return rep;
}

// --------------------------------------------------------------------------
// Generators used by tests and the CLI demos.

// The boundary of a tubular neighborhood of an edge class, intersected with
// the interior: one type IV quad per corner of the class, glued in a cycle
// through the hexagonal faces. Its two boundary circles lie on dM.
inline SurfaceComplex edge_tube_surface(const IdealTriangulation& tri, int class_id) {
  auto walk = tri.edge_class_cycle(class_id);
  SurfaceComplex s;
  // propagate the two edge-end labels (a, b) along the walk
  int a = kEdgeVertices[walk[0].corner.edge][0];
  int b = kEdgeVertices[walk[0].corner.edge][1];
  std::vector<std::pair<int, int>> ends;
  for (std::size_t i = 0; i < walk.size(); ++i) {
    ends.push_back({a, b});
    const GluedFace& g = tri.glued(walk[i].corner.tet, walk[i].depart_face);
    a = g.perm[a];
    b = g.perm[b];
  }
  for (std::size_t i = 0; i < walk.size(); ++i) {
    auto [av, bv] = ends[i];
    AdmissibleDisk disk;
    disk.tet = walk[i].corner.tet;
    int arr = walk[i].arrive_face, dep = walk[i].depart_face;
    disk.corners = {SurfaceCorner::external(av, arr), SurfaceCorner::external(av, dep),
                    SurfaceCorner::external(bv, dep), SurfaceCorner::external(bv, arr)};
    s.disks.push_back(disk);
  }
  const int k = static_cast<int>(walk.size());
  for (int i = 0; i < k; ++i)
    s.pairings.push_back({i, 1, (i + 1) % k, 3});  // side 1 crosses the departure hexagon
  return s;
}

// Boundary-parallel surface: one type I triangle per (tet, vertex), glued
// across every face gluing; a closed surface isotopic to dM pushed inward.
// Corner order follows the oriented link of the vertex, which odd gluing
// permutations reverse; this makes every pairing match with the reversed
// endpoint convention. Requires an oriented triangulation.
inline SurfaceComplex boundary_parallel_surface(const IdealTriangulation& tri) {
  if (!tri.oriented())
    throw SurfaceEncodingError("boundary-parallel surface needs an oriented triangulation");
  SurfaceComplex s;
  auto disk_id = [](int t, int v) { return t * 4 + v; };
  // cyclic order of the opposite vertices as seen from v: ascending when the
  // permutation (v, x1, x2, x3) of (0,1,2,3) is even, else swap the last two
  auto link_cycle = [](int v) {
    std::array<int, 3> xs{};
    int n = 0;
    for (int x = 0; x < 4; ++x)
      if (x != v) xs[n++] = x;
    if (v == 1 || v == 3) std::swap(xs[1], xs[2]);
    return xs;
  };
  for (int t = 0; t < tri.tet_count(); ++t)
    for (int v = 0; v < 4; ++v) {
      AdmissibleDisk d;
      d.tet = t;
      for (int x : link_cycle(v))
        d.corners.push_back(SurfaceCorner::internal(edge_between(v, x)));
      s.disks.push_back(d);
    }
  // side i of disk (t,v) joins corners on edges es[i], es[i+1]; it crosses the
  // hexagon avoiding both edges' other endpoints... compute and match slots
  std::set<std::pair<int, int>> done;
  for (int t = 0; t < tri.tet_count(); ++t)
    for (int v = 0; v < 4; ++v) {
      int d = disk_id(t, v);
      const auto& disk = s.disks[d];
      for (int i = 0; i < 3; ++i) {
        if (done.count({d, i})) continue;
        int e1 = disk.corners[i].edge, e2 = disk.corners[(i + 1) % 3].edge;
        // common hexagon of e1, e2 containing vertex v
        int f = -1;
        for (int cand : faces_of_edge(e1))
          if (!edge_has_vertex(e2, cand)) f = cand;
        const GluedFace& g = tri.glued(t, f);
        int d2 = disk_id(g.tet, g.perm[v]);
        // locate the matching side in the image disk
        const auto& disk2 = s.disks[d2];
        int me1 = map_edge(g.perm, e1), me2 = map_edge(g.perm, e2);
        int j = -1;
        for (int i2 = 0; i2 < 3; ++i2)
          if (disk2.corners[i2].edge == me2 && disk2.corners[(i2 + 1) % 3].edge == me1) j = i2;
        if (j < 0)
          throw SurfaceEncodingError("boundary-parallel construction failed to match sides");
        s.pairings.push_back({d, i, d2, j});
        done.insert({d, i});
        done.insert({d2, j});
      }
    }
  return s;
}

}  // namespace anglers
