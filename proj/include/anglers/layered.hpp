#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "anglers/angles.hpp"
#include "anglers/minkowski.hpp"
#include "anglers/triangulation.hpp"

namespace anglers {

class LayeredError : public std::runtime_error {
 public:
  explicit LayeredError(const std::string& what) : std::runtime_error(what) {}
};

// Untruncated hyperideal polyhedron given combinatorially; coordinates (one
// Minkowski 4-vector per vertex) are required only in geometric mode.
struct PolyhedralCell {
  std::vector<int> vertex_ids;
  std::vector<std::array<double, 4>> coords;  // aligned with vertex_ids when nonempty
  std::vector<std::vector<int>> faces;        // cyclic vertex-id sequences

  bool has_coords() const { return !coords.empty(); }
  int vertex_index(int id) const {
    for (std::size_t i = 0; i < vertex_ids.size(); ++i)
      if (vertex_ids[i] == id) return static_cast<int>(i);
    throw LayeredError("vertex id " + std::to_string(id) + " not in cell");
  }
};

// Orientation-reversing correspondence between two face cycles:
// position k of the from-face matches position correspondence[k] of the
// to-face, and consecutive positions map to consecutive positions backwards.
struct CellFacePairing {
  int from_cell = 0, from_face = 0, to_cell = 0, to_face = 0;
  std::vector<int> correspondence;
};

struct Decomposition {
  std::vector<PolyhedralCell> cells;
  std::vector<CellFacePairing> pairings;
};

enum class BuildMode { combinatorial, geometric };

struct TetProvenance {
  enum class Kind { cone, flat };
  Kind kind = Kind::cone;
  // cone
  int cell = -1;
  int apex_id = -1;
  int base_face = -1;
  int base_vertex_id = -1;
  // flat
  int pairing = -1;
  int switch_index = -1;
  std::array<int, 4> quad_vertex_ids{-1, -1, -1, -1};  // (v, u_k, u_{k+1}, v') as from-cell ids
};

struct LayeredOutput {
  IdealTriangulation triangulation;
  std::vector<TetTag> tags;
  std::optional<PartiallyFlatAssignment> beta;  // geometric mode
  std::vector<TetProvenance> provenance;
  int flat_count = 0;
};

// --------------------------------------------------------------------------
// Cell validation and coning.

namespace detail {

inline void validate_cell(const PolyhedralCell& cell, int index) {
  auto err = [&](const std::string& m) {
    throw LayeredError("cell " + std::to_string(index) + ": " + m);
  };
  if (cell.vertex_ids.size() < 4) err("needs at least 4 vertices");
  std::set<int> ids(cell.vertex_ids.begin(), cell.vertex_ids.end());
  if (ids.size() != cell.vertex_ids.size()) err("duplicate vertex ids");
  if (cell.has_coords() && cell.coords.size() != cell.vertex_ids.size())
    err("coordinate list does not match vertex list");
  if (cell.faces.size() < 4) err("needs at least 4 faces");
  std::map<std::pair<int, int>, int> edge_count;
  for (const auto& face : cell.faces) {
    if (face.size() < 3) err("degenerate face");
    std::set<int> fv(face.begin(), face.end());
    if (fv.size() != face.size()) err("face repeats a vertex");
    for (int v : face)
      if (!ids.count(v)) err("face references unknown vertex " + std::to_string(v));
    for (std::size_t i = 0; i < face.size(); ++i) {
      int a = face[i], b = face[(i + 1) % face.size()];
      edge_count[{std::min(a, b), std::max(a, b)}] += 1;
    }
  }
  for (const auto& [e, n] : edge_count)
    if (n != 2)
      err("edge {" + std::to_string(e.first) + "," + std::to_string(e.second) + "} lies in " +
          std::to_string(n) + " faces, expected 2");
  long V = static_cast<long>(cell.vertex_ids.size());
  long E = static_cast<long>(edge_count.size());
  long F = static_cast<long>(cell.faces.size());
  if (V - E + F != 2) err("face lattice is not a combinatorial sphere");
}

}  // namespace detail

// Fan description of one face after the deterministic cone choices.
struct FanDescription {
  int cone_vertex_id = -1;
  std::vector<std::array<int, 3>> triangles;  // vertex ids, fan vertex first
};

inline int cell_apex_id(const PolyhedralCell& cell) {
  return *std::min_element(cell.vertex_ids.begin(), cell.vertex_ids.end());
}

// Fan used on `face`: cone at the cell apex when the face contains it,
// otherwise at the face's lowest vertex id.
inline FanDescription face_triangulation(const PolyhedralCell& cell, int face) {
  const auto& cyc = cell.faces.at(face);
  int apex = cell_apex_id(cell);
  bool has_apex = std::find(cyc.begin(), cyc.end(), apex) != cyc.end();
  FanDescription fan;
  fan.cone_vertex_id = has_apex ? apex : *std::min_element(cyc.begin(), cyc.end());
  int n = static_cast<int>(cyc.size());
  int p = static_cast<int>(std::find(cyc.begin(), cyc.end(), fan.cone_vertex_id) - cyc.begin());
  for (int t = 0; t < n - 2; ++t)
    fan.triangles.push_back({fan.cone_vertex_id, cyc[(p + 1 + t) % n], cyc[(p + 2 + t) % n]});
  return fan;
}

// Cone subdivision: pyramids over the faces avoiding the apex, each base
// fanned at its lowest vertex. Tetrahedron count is sum (|D| - 2) over base
// faces D.
inline std::vector<std::array<int, 4>> cone_cell(const PolyhedralCell& cell, int apex_id) {
  if (std::find(cell.vertex_ids.begin(), cell.vertex_ids.end(), apex_id) == cell.vertex_ids.end())
    throw LayeredError("apex id is not a vertex of the cell");
  std::vector<std::array<int, 4>> tets;
  for (std::size_t f = 0; f < cell.faces.size(); ++f) {
    const auto& cyc = cell.faces[f];
    if (std::find(cyc.begin(), cyc.end(), apex_id) != cyc.end()) continue;
    int w = *std::min_element(cyc.begin(), cyc.end());
    int n = static_cast<int>(cyc.size());
    int p = static_cast<int>(std::find(cyc.begin(), cyc.end(), w) - cyc.begin());
    for (int t = 0; t < n - 2; ++t)
      tets.push_back({apex_id, w, cyc[(p + 1 + t) % n], cyc[(p + 2 + t) % n]});
  }
  if (tets.empty()) throw LayeredError("degenerate cell: coning produced no tetrahedra");
  return tets;
}

// Diagonal-switch layer between the fan at position v and the fan at position
// vp of an n-gon (positions 0..n-1 on the cycle). Returns the flat-tetrahedron
// quads (v, u_k, u_{k+1}, vp) in stacking order, fan-at-vp side first.
inline std::vector<std::array<int, 4>> flat_layer_quads(int n, int v, int vp) {
  if (v == vp) return {};
  std::vector<int> u_arc, w_arc;  // positions strictly between v and vp
  for (int q = (v + 1) % n; q != vp; q = (q + 1) % n) u_arc.push_back(q);
  for (int q = (vp + 1) % n; q != v; q = (q + 1) % n) w_arc.push_back(q);
  std::reverse(w_arc.begin(), w_arc.end());  // order along the boundary from v to vp
  std::vector<std::array<int, 4>> quads;
  for (std::size_t k = 0; k + 1 < u_arc.size(); ++k)
    quads.push_back({v, u_arc[k], u_arc[k + 1], vp});
  for (std::size_t k = 0; k + 1 < w_arc.size(); ++k)
    quads.push_back({v, w_arc[k], w_arc[k + 1], vp});
  return quads;
}

// --------------------------------------------------------------------------
// Assembly.

namespace detail {

// Construction vertices live in per-cell namespaces; flat layers get one
// namespace per pairing (position-indexed).
struct VKey {
  int ns = 0;  // cell index, or cells.size()+pairing for layer namespaces
  int id = 0;
  auto operator<=>(const VKey&) const = default;
};

struct ProtoTet {
  std::array<VKey, 4> v;
  TetProvenance prov;
  TetTag tag = TetTag::hyperideal;
};

struct ProtoGluing {
  int t1 = 0, t2 = 0;
  // shared-vertex bijection: three (key-in-t1, key-in-t2) pairs
  std::array<std::pair<VKey, VKey>, 3> shared;
};

}  // namespace detail

inline LayeredOutput build_layered(const Decomposition& dec, BuildMode mode) {
  using detail::ProtoGluing;
  using detail::ProtoTet;
  using detail::VKey;

  if (dec.cells.empty()) throw LayeredError("empty decomposition");
  for (std::size_t c = 0; c < dec.cells.size(); ++c) detail::validate_cell(dec.cells[c], c);
  if (mode == BuildMode::geometric)
    for (std::size_t c = 0; c < dec.cells.size(); ++c)
      if (!dec.cells[c].has_coords())
        throw LayeredError("geometric mode needs coordinates on cell " + std::to_string(c));

  // pairing validation: all faces paired exactly once, orientation-reversing
  std::map<std::pair<int, int>, int> face_pairing;  // (cell,face) -> pairing
  for (std::size_t p = 0; p < dec.pairings.size(); ++p) {
    const auto& pr = dec.pairings[p];
    auto check_face = [&](int c, int f) {
      if (c < 0 || c >= static_cast<int>(dec.cells.size()) || f < 0 ||
          f >= static_cast<int>(dec.cells[c].faces.size()))
        throw LayeredError("pairing " + std::to_string(p) + " references missing face");
    };
    check_face(pr.from_cell, pr.from_face);
    check_face(pr.to_cell, pr.to_face);
    if (pr.from_cell == pr.to_cell && pr.from_face == pr.to_face)
      throw LayeredError("pairing " + std::to_string(p) + " glues a face to itself");
    const auto& fa = dec.cells[pr.from_cell].faces[pr.from_face];
    const auto& fb = dec.cells[pr.to_cell].faces[pr.to_face];
    int n = static_cast<int>(fa.size());
    if (static_cast<int>(fb.size()) != n)
      throw LayeredError("pairing " + std::to_string(p) + " joins faces of different sizes");
    if (static_cast<int>(pr.correspondence.size()) != n)
      throw LayeredError("pairing " + std::to_string(p) + " correspondence size mismatch");
    std::set<int> image(pr.correspondence.begin(), pr.correspondence.end());
    if (static_cast<int>(image.size()) != n || *image.begin() != 0 || *image.rbegin() != n - 1)
      throw LayeredError("pairing " + std::to_string(p) + " correspondence is not a bijection");
    for (int k = 0; k < n; ++k)
      if (pr.correspondence[(k + 1) % n] != (pr.correspondence[k] + n - 1) % n)
        throw LayeredError("pairing " + std::to_string(p) +
                           " correspondence does not reverse the cycle orientation");
    for (auto cf : {std::pair{pr.from_cell, pr.from_face}, std::pair{pr.to_cell, pr.to_face}}) {
      if (face_pairing.count(cf))
        throw LayeredError("face (" + std::to_string(cf.first) + "," + std::to_string(cf.second) +
                           ") appears in two pairings");
      face_pairing[cf] = static_cast<int>(p);
    }
  }
  for (std::size_t c = 0; c < dec.cells.size(); ++c)
    for (std::size_t f = 0; f < dec.cells[c].faces.size(); ++f)
      if (!face_pairing.count({static_cast<int>(c), static_cast<int>(f)}))
        throw LayeredError("face (" + std::to_string(c) + "," + std::to_string(f) + ") is unpaired");

  // ---- cone every cell ------------------------------------------------
  std::vector<ProtoTet> tets;
  std::vector<ProtoGluing> gluings;
  const int ncells = static_cast<int>(dec.cells.size());

  // per cell: map sorted key triple -> incident tets (for internal gluings)
  // per (cell, face): map sorted id triple -> tet (boundary fan triangles)
  std::vector<std::map<std::array<int, 3>, std::vector<int>>> cell_triples(ncells);
  std::map<std::pair<int, int>, std::map<std::array<int, 3>, int>> face_owner;

  for (int c = 0; c < ncells; ++c) {
    const auto& cell = dec.cells[c];
    int apex = cell_apex_id(cell);
    const std::size_t before = tets.size();
    for (std::size_t f = 0; f < cell.faces.size(); ++f) {
      const auto& cyc = cell.faces[f];
      if (std::find(cyc.begin(), cyc.end(), apex) != cyc.end()) continue;
      int w = *std::min_element(cyc.begin(), cyc.end());
      int n = static_cast<int>(cyc.size());
      int p = static_cast<int>(std::find(cyc.begin(), cyc.end(), w) - cyc.begin());
      for (int t = 0; t < n - 2; ++t) {
        ProtoTet pt;
        int x = cyc[(p + 1 + t) % n], y = cyc[(p + 2 + t) % n];
        pt.v = {VKey{c, apex}, VKey{c, w}, VKey{c, x}, VKey{c, y}};
        pt.prov.kind = TetProvenance::Kind::cone;
        pt.prov.cell = c;
        pt.prov.apex_id = apex;
        pt.prov.base_face = static_cast<int>(f);
        pt.prov.base_vertex_id = w;
        tets.push_back(pt);
      }
    }
    if (tets.size() == before)
      throw LayeredError("cell " + std::to_string(c) + ": coning produced no tetrahedra");
  }
  // index tets per cell and collect triples
  for (std::size_t ti = 0; ti < tets.size(); ++ti) {
    if (tets[ti].prov.kind != TetProvenance::Kind::cone) continue;
    int c = tets[ti].prov.cell;
    std::array<int, 4> ids{tets[ti].v[0].id, tets[ti].v[1].id, tets[ti].v[2].id, tets[ti].v[3].id};
    for (int skip = 0; skip < 4; ++skip) {
      std::array<int, 3> tri{};
      int n = 0;
      for (int k = 0; k < 4; ++k)
        if (k != skip) tri[n++] = ids[k];
      std::sort(tri.begin(), tri.end());
      cell_triples[c][tri].push_back(static_cast<int>(ti));
    }
  }
  // internal gluings: triples shared by exactly two tets of the same cell;
  // triples seen once must be fan triangles of the cell boundary
  for (int c = 0; c < ncells; ++c) {
    for (const auto& [tri, owners] : cell_triples[c]) {
      if (owners.size() == 2) {
        ProtoGluing g;
        g.t1 = owners[0];
        g.t2 = owners[1];
        for (int k = 0; k < 3; ++k) g.shared[k] = {VKey{c, tri[k]}, VKey{c, tri[k]}};
        gluings.push_back(g);
      } else if (owners.size() != 1) {
        throw LayeredError("cell " + std::to_string(c) + ": triangle shared by " +
                           std::to_string(owners.size()) + " tetrahedra");
      }
    }
    for (std::size_t f = 0; f < dec.cells[c].faces.size(); ++f) {
      FanDescription fan = face_triangulation(dec.cells[c], static_cast<int>(f));
      auto& owner_map = face_owner[{c, static_cast<int>(f)}];
      for (const auto& t3 : fan.triangles) {
        std::array<int, 3> key{t3[0], t3[1], t3[2]};
        std::sort(key.begin(), key.end());
        auto it = cell_triples[c].find(key);
        if (it == cell_triples[c].end() || it->second.size() != 1)
          throw LayeredError("cell " + std::to_string(c) +
                             ": fan triangle is not a boundary triangle of the cone subdivision");
        owner_map[key] = it->second[0];
      }
    }
  }

  // ---- pairings: direct gluings or flat layers -------------------------
  int flat_count = 0;
  for (std::size_t p = 0; p < dec.pairings.size(); ++p) {
    const auto& pr = dec.pairings[p];
    const auto& fa = dec.cells[pr.from_cell].faces[pr.from_face];
    const auto& fb = dec.cells[pr.to_cell].faces[pr.to_face];
    const int n = static_cast<int>(fa.size());
    FanDescription fan_a = face_triangulation(dec.cells[pr.from_cell], pr.from_face);
    FanDescription fan_b = face_triangulation(dec.cells[pr.to_cell], pr.to_face);
    auto pos_in = [&](const std::vector<int>& cyc, int id) {
      return static_cast<int>(std::find(cyc.begin(), cyc.end(), id) - cyc.begin());
    };
    int va = pos_in(fa, fan_a.cone_vertex_id);
    int qb = pos_in(fb, fan_b.cone_vertex_id);
    int vp = 0;  // position (in from-face coordinates) of the to-side cone vertex
    while (pr.correspondence[vp] != qb) ++vp;

    auto a_key = [&](int pos) { return VKey{pr.from_cell, fa[pos]}; };
    auto b_key = [&](int pos) { return VKey{pr.to_cell, fb[pr.correspondence[pos]]}; };
    auto a_owner = [&](std::array<int, 3> positions) {
      std::array<int, 3> ids{fa[positions[0]], fa[positions[1]], fa[positions[2]]};
      std::sort(ids.begin(), ids.end());
      return face_owner.at({pr.from_cell, pr.from_face}).at(ids);
    };
    auto b_owner = [&](std::array<int, 3> positions) {
      std::array<int, 3> ids{fb[pr.correspondence[positions[0]]],
                             fb[pr.correspondence[positions[1]]],
                             fb[pr.correspondence[positions[2]]]};
      std::sort(ids.begin(), ids.end());
      return face_owner.at({pr.to_cell, pr.to_face}).at(ids);
    };

    if (va == vp) {
      // fans agree: glue fan triangles straight across
      for (int t = 0; t < n - 2; ++t) {
        std::array<int, 3> tri{va, (va + 1 + t) % n, (va + 2 + t) % n};
        ProtoGluing g;
        g.t1 = a_owner(tri);
        g.t2 = b_owner(tri);
        for (int k = 0; k < 3; ++k) g.shared[k] = {a_key(tri[k]), b_key(tri[k])};
        gluings.push_back(g);
      }
      continue;
    }

    // mismatched fans: build the layered stack in from-face positions
    const int layer_ns = ncells + static_cast<int>(p);
    auto quads = flat_layer_quads(n, va, vp);
    // current triangulation of the polygon: sorted position triple -> (tet,
    // namespace flag) where owner tets are addressed per triple
    std::map<std::array<int, 3>, std::pair<int, bool>> state;  // tet index, is_layer
    auto sort3 = [](std::array<int, 3> a) {
      std::sort(a.begin(), a.end());
      return a;
    };
    for (int t = 0; t < n - 2; ++t) {
      std::array<int, 3> tri{vp, (vp + 1 + t) % n, (vp + 2 + t) % n};
      state[sort3(tri)] = {b_owner(tri), false};
    }
    auto glue_to_state = [&](std::array<int, 3> tri_positions, int layer_tet) {
      auto key = sort3(tri_positions);
      auto it = state.find(key);
      if (it == state.end())
        throw LayeredError("layer stacking lost track of a triangle (internal error)");
      auto [owner, is_layer] = it->second;
      ProtoGluing g;
      g.t1 = layer_tet;
      g.t2 = owner;
      for (int k = 0; k < 3; ++k) {
        VKey mine{layer_ns, key[k]};
        VKey theirs = is_layer ? VKey{layer_ns, key[k]} : b_key(key[k]);
        g.shared[k] = {mine, theirs};
      }
      gluings.push_back(g);
      state.erase(it);
    };
    for (std::size_t s = 0; s < quads.size(); ++s) {
      auto [qv, q1, q2, qp] = std::array<int, 4>{quads[s][0], quads[s][1], quads[s][2], quads[s][3]};
      ProtoTet pt;
      pt.v = {VKey{layer_ns, qv}, VKey{layer_ns, q1}, VKey{layer_ns, q2}, VKey{layer_ns, qp}};
      pt.tag = TetTag::flat;
      pt.prov.kind = TetProvenance::Kind::flat;
      pt.prov.pairing = static_cast<int>(p);
      pt.prov.switch_index = static_cast<int>(s);
      pt.prov.quad_vertex_ids = {fa[qv], fa[q1], fa[q2], fa[qp]};
      int ti = static_cast<int>(tets.size());
      tets.push_back(pt);
      ++flat_count;
      // glue the two old-diagonal faces into the current state, then expose
      // the two new-diagonal faces
      glue_to_state({qv, q1, qp}, ti);   // (v, u_k, v')
      glue_to_state({q1, q2, qp}, ti);   // (u_k, u_{k+1}, v')
      state[sort3({qv, q1, q2})] = {ti, true};  // (v, u_k, u_{k+1})
      state[sort3({qv, q2, qp})] = {ti, true};  // (v, u_{k+1}, v')
    }
    // final state must be the fan at va; glue it to the from-cell side
    for (int t = 0; t < n - 2; ++t) {
      std::array<int, 3> tri{va, (va + 1 + t) % n, (va + 2 + t) % n};
      auto key = sort3(tri);
      auto it = state.find(key);
      if (it == state.end())
        throw LayeredError("layer stacking did not terminate at the from-side fan");
      auto [owner, is_layer] = it->second;
      ProtoGluing g;
      g.t1 = a_owner(tri);
      g.t2 = owner;
      for (int k = 0; k < 3; ++k)
        g.shared[k] = {a_key(key[k]), is_layer ? VKey{layer_ns, key[k]} : b_key(key[k])};
      gluings.push_back(g);
      state.erase(it);
    }
    if (!state.empty()) throw LayeredError("layer stacking left unmatched triangles");
  }

  // ---- orientation: flip tets so every gluing permutation is odd -------
  auto local_pos = [](const ProtoTet& t, const VKey& k) {
    for (int i = 0; i < 4; ++i)
      if (t.v[i] == k) return i;
    throw LayeredError("internal error: shared vertex not in tetrahedron");
  };
  auto gluing_perm = [&](const ProtoGluing& g) {
    Perm4 perm;
    std::array<bool, 4> used{false, false, false, false};
    int o1 = 0 + 1 + 2 + 3, o2 = o1;
    for (const auto& [ka, kb] : g.shared) {
      int i = local_pos(tets[g.t1], ka), j = local_pos(tets[g.t2], kb);
      perm.img[i] = static_cast<std::uint8_t>(j);
      used[i] = true;
      o1 -= i;
      o2 -= j;
    }
    perm.img[o1] = static_cast<std::uint8_t>(o2);
    return perm;
  };
  // parity constraint: flip[t1] xor flip[t2] xor (perm odd) = 1
  std::vector<int> flip(tets.size(), -1);
  std::vector<std::vector<std::pair<int, int>>> adj(tets.size());  // (other, parity)
  for (const auto& g : gluings) {
    int parity = gluing_perm(g).is_odd() ? 1 : 0;
    adj[g.t1].push_back({g.t2, parity});
    adj[g.t2].push_back({g.t1, parity});
  }
  for (std::size_t seed = 0; seed < tets.size(); ++seed) {
    if (flip[seed] >= 0) continue;
    flip[seed] = 0;
    std::vector<int> stack{static_cast<int>(seed)};
    while (!stack.empty()) {
      int t = stack.back();
      stack.pop_back();
      for (auto [o, parity] : adj[t]) {
        int want = flip[t] ^ parity ^ 1;
        if (flip[o] < 0) {
          flip[o] = want;
          stack.push_back(o);
        } else if (flip[o] != want) {
          throw LayeredError("decomposition is not orientable: no consistent tetrahedron "
                             "orientations exist");
        }
      }
    }
  }
  for (std::size_t t = 0; t < tets.size(); ++t)
    if (flip[t] == 1) std::swap(tets[t].v[2], tets[t].v[3]);

  // ---- emit the ideal triangulation ------------------------------------
  std::vector<FaceGluing> face_gluings;
  for (const auto& g : gluings) {
    Perm4 perm = gluing_perm(g);
    int o1 = 0;
    {
      std::array<bool, 4> shared1{false, false, false, false};
      for (const auto& [ka, kb] : g.shared) shared1[local_pos(tets[g.t1], ka)] = true;
      for (int i = 0; i < 4; ++i)
        if (!shared1[i]) o1 = i;
    }
    face_gluings.push_back({g.t1, o1, g.t2, perm[o1], perm});
  }
  LayeredOutput out{
      IdealTriangulation::build(static_cast<int>(tets.size()), face_gluings, {}),
      {},
      std::nullopt,
      {},
      flat_count};
  for (const auto& t : tets) {
    out.tags.push_back(t.tag);
    out.provenance.push_back(t.prov);
  }

  // Lemma 4.1: every edge class meets a hyperideal (cone) tetrahedron
  for (const auto& cls : out.triangulation.edge_classes()) {
    bool has_cone = false;
    for (const auto& c : cls.corners)
      if (out.tags[c.tet] == TetTag::hyperideal) has_cone = true;
    if (!has_cone)
      throw LayeredError("edge class " + std::to_string(cls.id) +
                         " meets only flat tetrahedra (Lemma 4.1 violation)");
  }

  // ---- geometric mode: inherited beta ----------------------------------
  if (mode == BuildMode::geometric) {
    std::vector<double> values(out.triangulation.corner_count(), 0.0);
    for (std::size_t t = 0; t < tets.size(); ++t) {
      if (tets[t].tag == TetTag::flat) {
        // pi on the two quad diagonals; positions may have been swapped by the
        // orientation pass, so locate the diagonal vertices afresh.
        // diagonal pairs are (quad[0], quad[2]) and (quad[1], quad[3])
        const auto& prov = tets[t].prov;
        std::array<VKey, 4> quad_keys;
        {
          const auto& pr = dec.pairings[prov.pairing];
          const auto& fa_cyc = dec.cells[pr.from_cell].faces[pr.from_face];
          for (int k = 0; k < 4; ++k) {
            int pos = static_cast<int>(
                std::find(fa_cyc.begin(), fa_cyc.end(), prov.quad_vertex_ids[k]) - fa_cyc.begin());
            quad_keys[k] = VKey{ncells + prov.pairing, pos};
          }
        }
        auto lp = [&](const VKey& k) { return local_pos(tets[t], k); };
        int d1a = lp(quad_keys[0]), d1b = lp(quad_keys[2]);
        int d2a = lp(quad_keys[1]), d2b = lp(quad_keys[3]);
        values[t * 6 + kEdgeBetween[d1a][d1b]] = kPi;
        values[t * 6 + kEdgeBetween[d2a][d2b]] = kPi;
      } else {
        const auto& cell = dec.cells[tets[t].prov.cell];
        std::array<MinkowskiVertex, 4> vs;
        for (int k = 0; k < 4; ++k) {
          int vi = cell.vertex_index(tets[t].v[k].id);
          vs[k] = MinkowskiVertex{cell.coords[vi]};
        }
        AngleSextuple th;
        try {
          th = angles_from_vertices(vs);
        } catch (const GeometryError& e) {
          throw LayeredError("cell " + std::to_string(tets[t].prov.cell) + " tetrahedron {" +
                             std::to_string(tets[t].v[0].id) + "," + std::to_string(tets[t].v[1].id) +
                             "," + std::to_string(tets[t].v[2].id) + "," +
                             std::to_string(tets[t].v[3].id) + "}: " + e.what());
        }
        for (int e = 0; e < 6; ++e) values[t * 6 + e] = th[e];
      }
    }
    PartiallyFlatAssignment beta;
    beta.values = AngleAssignment::floating(values);
    beta.tags = out.tags;
    // theorem-level check: edge sums of the inherited angles are 2 pi
    for (const auto& cls : out.triangulation.edge_classes()) {
      double sum = 0;
      for (const auto& c : cls.corners) sum += values[c.slot()];
      if (std::abs(sum - 2 * kPi) > 1e-9)
        throw LayeredError("edge class " + std::to_string(cls.id) + " has angle sum " +
                           std::to_string(sum) + ", expected 2 pi within 1e-9 (non-geometric "
                           "input data)");
    }
    out.beta = std::move(beta);
  }
  return out;
}

}  // namespace anglers
