#pragma once

#include <array>
#include <stdexcept>

#include "anglers/perm4.hpp"

namespace anglers {

// Edges of a (truncated) tetrahedron are indexed 0..5 by their vertex pair in
// lexicographic order:
//   0:{0,1}  1:{0,2}  2:{0,3}  3:{1,2}  4:{1,3}  5:{2,3}
// Opposite pairs are (0,5), (1,4), (2,3), i.e. e and 5-e.
inline constexpr int kEdgeVertices[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

inline constexpr int kEdgeBetween[4][4] = {
    {-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};

constexpr int edge_between(int a, int b) {
  int e = kEdgeBetween[a][b];
  if (e < 0) throw std::invalid_argument("no edge between equal vertices");
  return e;
}

constexpr int opposite_edge(int e) { return 5 - e; }

// The three edges incident to vertex v.
constexpr std::array<int, 3> edges_at_vertex(int v) {
  std::array<int, 3> out{};
  int n = 0;
  for (int e = 0; e < 6; ++e)
    if (kEdgeVertices[e][0] == v || kEdgeVertices[e][1] == v) out[n++] = e;
  return out;
}

// Hexagonal face f is opposite vertex f; it contains the three edges that
// avoid vertex f (equivalently, the edges at the opposite external face's
// link). These are exactly the edges of edges_at_vertex(f)'s complement.
constexpr std::array<int, 3> edges_of_face(int f) {
  std::array<int, 3> out{};
  int n = 0;
  for (int e = 0; e < 6; ++e)
    if (kEdgeVertices[e][0] != f && kEdgeVertices[e][1] != f) out[n++] = e;
  return out;
}

// The two hexagonal faces containing edge e (the complement of its vertices).
constexpr std::array<int, 2> faces_of_edge(int e) {
  std::array<int, 2> out{};
  int n = 0;
  for (int f = 0; f < 4; ++f)
    if (kEdgeVertices[e][0] != f && kEdgeVertices[e][1] != f) out[n++] = f;
  return out;
}

// Image of edge e under the vertex map p.
constexpr int map_edge(const Perm4& p, int e) {
  return kEdgeBetween[p[kEdgeVertices[e][0]]][p[kEdgeVertices[e][1]]];
}

constexpr bool edge_has_vertex(int e, int v) {
  return kEdgeVertices[e][0] == v || kEdgeVertices[e][1] == v;
}

// Remaining vertex of face f besides the edge e (requires e in face f).
constexpr int third_vertex(int f, int e) {
  for (int v = 0; v < 4; ++v)
    if (v != f && !edge_has_vertex(e, v)) return v;
  return -1;
}

}  // namespace anglers
