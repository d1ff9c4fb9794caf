#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "anglers/angles.hpp"
#include "anglers/layered.hpp"
#include "anglers/lp.hpp"
#include "anglers/surfaces.hpp"
#include "anglers/triangulation.hpp"
#include "anglers/volume_opt.hpp"

namespace anglers {

using nlohmann::json;

class IOError : public std::runtime_error {
 public:
  explicit IOError(const std::string& what) : std::runtime_error(what) {}
};

// --------------------------------------------------------------------------
// Triangulation files:
// {"tets": N, "gluings": [{"from":[t,f],"to":[t2,f2],"perm":[p0,p1,p2,p3]}]}

inline json triangulation_to_json(int tet_count, const std::vector<FaceGluing>& gluings) {
  json out;
  out["tets"] = tet_count;
  out["gluings"] = json::array();
  for (const auto& g : gluings) {
    json rec;
    rec["from"] = {g.from_tet, g.from_face};
    rec["to"] = {g.to_tet, g.to_face};
    rec["perm"] = {g.perm[0], g.perm[1], g.perm[2], g.perm[3]};
    out["gluings"].push_back(rec);
  }
  return out;
}

inline json triangulation_to_json(const IdealTriangulation& tri) {
  return triangulation_to_json(tri.tet_count(), tri.gluings());
}

struct TriangulationData {
  int tet_count = 0;
  std::vector<FaceGluing> gluings;
};

inline TriangulationData triangulation_from_json(const json& j) {
  TriangulationData data;
  try {
    data.tet_count = j.at("tets").get<int>();
    for (const auto& rec : j.at("gluings")) {
      FaceGluing g;
      g.from_tet = rec.at("from").at(0).get<int>();
      g.from_face = rec.at("from").at(1).get<int>();
      g.to_tet = rec.at("to").at(0).get<int>();
      g.to_face = rec.at("to").at(1).get<int>();
      auto p = rec.at("perm");
      if (p.size() != 4) throw IOError("perm must have 4 entries");
      g.perm = Perm4(p.at(0).get<int>(), p.at(1).get<int>(), p.at(2).get<int>(),
                     p.at(3).get<int>());
      data.gluings.push_back(g);
    }
  } catch (const json::exception& e) {
    throw IOError(std::string("malformed triangulation JSON: ") + e.what());
  }
  return data;
}

// --------------------------------------------------------------------------
// Angle files:
// {"mode":"rational-pi"|"radians","values":{"t.e": "p/q" | number},
//  "tags":{"t":"flat"|"hyperideal"}}   (tags optional)

inline json angles_to_json(const AngleAssignment& a, const std::vector<TetTag>* tags = nullptr) {
  json out;
  out["mode"] = a.exact_mode() ? "rational-pi" : "radians";
  json values = json::object();
  for (int slot = 0; slot < a.size(); ++slot) {
    std::string key = std::to_string(slot / 6) + "." + std::to_string(slot % 6);
    if (a.exact_mode())
      values[key] = format_rational(a.pi_units(slot));
    else
      values[key] = a.flt[slot];
  }
  out["values"] = std::move(values);
  if (tags) {
    json jt = json::object();
    for (std::size_t t = 0; t < tags->size(); ++t)
      jt[std::to_string(t)] = tag_name((*tags)[t]);
    out["tags"] = std::move(jt);
  }
  return out;
}

struct AngleFileData {
  AngleAssignment assignment;
  std::optional<std::vector<TetTag>> tags;
};

inline AngleFileData angles_from_json(const json& j, int corner_count) {
  AngleFileData out;
  try {
    std::string mode = j.at("mode").get<std::string>();
    const auto& values = j.at("values");
    if (static_cast<int>(values.size()) != corner_count)
      throw IOError("angle file covers " + std::to_string(values.size()) + " corners, expected " +
                    std::to_string(corner_count));
    if (mode == "rational-pi") {
      std::vector<Rational> v(corner_count);
      for (auto it = values.begin(); it != values.end(); ++it) {
        auto dot = it.key().find('.');
        int slot = std::stoi(it.key().substr(0, dot)) * 6 + std::stoi(it.key().substr(dot + 1));
        if (slot < 0 || slot >= corner_count) throw IOError("corner key out of range: " + it.key());
        v[slot] = parse_rational(it.value().get<std::string>());
      }
      out.assignment = AngleAssignment::exact(std::move(v));
    } else if (mode == "radians") {
      std::vector<double> v(corner_count, 0.0);
      for (auto it = values.begin(); it != values.end(); ++it) {
        auto dot = it.key().find('.');
        int slot = std::stoi(it.key().substr(0, dot)) * 6 + std::stoi(it.key().substr(dot + 1));
        if (slot < 0 || slot >= corner_count) throw IOError("corner key out of range: " + it.key());
        v[slot] = it.value().get<double>();
      }
      out.assignment = AngleAssignment::floating(std::move(v));
    } else {
      throw IOError("unknown angle mode '" + mode + "'");
    }
    if (j.contains("tags")) {
      std::vector<TetTag> tags(corner_count / 6, TetTag::hyperideal);
      for (auto it = j["tags"].begin(); it != j["tags"].end(); ++it) {
        int t = std::stoi(it.key());
        if (t < 0 || t >= static_cast<int>(tags.size()))
          throw IOError("tag tetrahedron out of range");
        std::string s = it.value().get<std::string>();
        if (s != "flat" && s != "hyperideal") throw IOError("unknown tag '" + s + "'");
        tags[t] = (s == "flat") ? TetTag::flat : TetTag::hyperideal;
      }
      out.tags = std::move(tags);
    }
  } catch (const json::exception& e) {
    throw IOError(std::string("malformed angle JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw IOError(std::string("malformed angle JSON: ") + e.what());
  }
  return out;
}

// --------------------------------------------------------------------------
// Surface files:
// {"disks":[{"tet":t,"corners":[{"kind":"internal","edge":e}|
//                               {"kind":"external","vertex":v,"face":f}]}],
//  "pairings":[[[d,s],[d2,s2]], ...]}

inline json surface_to_json(const SurfaceComplex& s) {
  json out;
  out["disks"] = json::array();
  for (const auto& d : s.disks) {
    json dj;
    dj["tet"] = d.tet;
    dj["corners"] = json::array();
    for (const auto& c : d.corners) {
      json cj;
      if (c.is_internal()) {
        cj["kind"] = "internal";
        cj["edge"] = c.edge;
      } else {
        cj["kind"] = "external";
        cj["vertex"] = c.vertex;
        cj["face"] = c.face;
      }
      dj["corners"].push_back(cj);
    }
    out["disks"].push_back(dj);
  }
  out["pairings"] = json::array();
  for (const auto& p : s.pairings)
    out["pairings"].push_back({{p.disk_a, p.side_a}, {p.disk_b, p.side_b}});
  return out;
}

inline SurfaceComplex surface_from_json(const json& j) {
  SurfaceComplex s;
  try {
    for (const auto& dj : j.at("disks")) {
      AdmissibleDisk d;
      d.tet = dj.at("tet").get<int>();
      for (const auto& cj : dj.at("corners")) {
        std::string kind = cj.at("kind").get<std::string>();
        if (kind == "internal")
          d.corners.push_back(SurfaceCorner::internal(cj.at("edge").get<int>()));
        else if (kind == "external")
          d.corners.push_back(
              SurfaceCorner::external(cj.at("vertex").get<int>(), cj.at("face").get<int>()));
        else
          throw IOError("unknown corner kind '" + kind + "'");
      }
      s.disks.push_back(std::move(d));
    }
    for (const auto& pj : j.at("pairings")) {
      if (pj.size() != 2 || pj.at(0).size() != 2 || pj.at(1).size() != 2)
        throw IOError("pairing entries must be [[d,s],[d2,s2]]");
      s.pairings.push_back({pj.at(0).at(0).get<int>(), pj.at(0).at(1).get<int>(),
                            pj.at(1).at(0).get<int>(), pj.at(1).at(1).get<int>()});
    }
  } catch (const json::exception& e) {
    throw IOError(std::string("malformed surface JSON: ") + e.what());
  }
  return s;
}

// --------------------------------------------------------------------------
// Decomposition files:
// {"cells":[{"vertices":[id,...] or [[x0,x1,x2,x3],...], "faces":[[v,...],...]}],
//  "pairings":[{"from":[c,f],"to":[c2,f2],"correspondence":[...]}]}
// Coordinate-form vertices are implicitly numbered 0..n-1.

inline json decomposition_to_json(const Decomposition& dec) {
  json out;
  out["cells"] = json::array();
  for (const auto& cell : dec.cells) {
    json cj;
    if (cell.has_coords()) {
      json vs = json::array();
      for (const auto& x : cell.coords) vs.push_back({x[0], x[1], x[2], x[3]});
      cj["vertices"] = std::move(vs);
    } else {
      cj["vertices"] = cell.vertex_ids;
    }
    cj["faces"] = cell.faces;
    out["cells"].push_back(cj);
  }
  out["pairings"] = json::array();
  for (const auto& p : dec.pairings) {
    json pj;
    pj["from"] = {p.from_cell, p.from_face};
    pj["to"] = {p.to_cell, p.to_face};
    pj["correspondence"] = p.correspondence;
    out["pairings"].push_back(pj);
  }
  return out;
}

inline Decomposition decomposition_from_json(const json& j) {
  Decomposition dec;
  try {
    for (const auto& cj : j.at("cells")) {
      PolyhedralCell cell;
      const auto& vs = cj.at("vertices");
      for (std::size_t i = 0; i < vs.size(); ++i) {
        if (vs.at(i).is_array()) {
          if (vs.at(i).size() != 4) throw IOError("vertex coordinates must have 4 entries");
          cell.vertex_ids.push_back(static_cast<int>(i));
          cell.coords.push_back({vs.at(i).at(0).get<double>(), vs.at(i).at(1).get<double>(),
                                 vs.at(i).at(2).get<double>(), vs.at(i).at(3).get<double>()});
        } else {
          cell.vertex_ids.push_back(vs.at(i).get<int>());
        }
      }
      if (!cell.coords.empty() && cell.coords.size() != cell.vertex_ids.size())
        throw IOError("cells must be all-coordinate or all-id");
      for (const auto& fj : cj.at("faces")) cell.faces.push_back(fj.get<std::vector<int>>());
      dec.cells.push_back(std::move(cell));
    }
    for (const auto& pj : j.at("pairings")) {
      CellFacePairing p;
      p.from_cell = pj.at("from").at(0).get<int>();
      p.from_face = pj.at("from").at(1).get<int>();
      p.to_cell = pj.at("to").at(0).get<int>();
      p.to_face = pj.at("to").at(1).get<int>();
      p.correspondence = pj.at("correspondence").get<std::vector<int>>();
      dec.pairings.push_back(std::move(p));
    }
  } catch (const json::exception& e) {
    throw IOError(std::string("malformed decomposition JSON: ") + e.what());
  }
  return dec;
}

// --------------------------------------------------------------------------
// Reports and certificates.

inline json certificate_to_json(const AnglePolytope& p, const FarkasCertificate& cert) {
  json out;
  out["kind"] = "farkas";
  out["value"] = format_rational(cert.value);
  json ey = json::object();
  for (std::size_t e = 0; e < cert.edge_y.size(); ++e)
    ey[std::to_string(e)] = format_rational(cert.edge_y[e]);
  out["edge_multipliers"] = std::move(ey);
  json vu = json::object();
  for (std::size_t v = 0; v < cert.vertex_u.size(); ++v)
    vu[std::to_string(p.vertex_names[v].first) + "." + std::to_string(p.vertex_names[v].second)] =
        format_rational(cert.vertex_u[v]);
  out["vertex_multipliers"] = std::move(vu);
  json cw = json::object();
  for (std::size_t c = 0; c < cert.corner_w.size(); ++c)
    cw[std::to_string(c / 6) + "." + std::to_string(c % 6)] = format_rational(cert.corner_w[c]);
  out["corner_multipliers"] = std::move(cw);
  return out;
}

inline json volume_report_to_json(const VolumeReport& r) {
  json out;
  out["volume"] = r.total_volume;
  out["per_tet_volumes"] = r.per_tet_volumes;
  out["gradient_norm"] = r.gradient_norm;
  out["edge_length_residual"] = r.edge_length_residual;
  return out;
}

// --------------------------------------------------------------------------
// File helpers. Serialization is canonical: nlohmann::json keeps object keys
// sorted, and we always emit 2-space indentation with a trailing newline.

inline std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IOError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw IOError("cannot parse " + path + ": " + e.what());
  }
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IOError("cannot write " + path);
  out << canonical_dump(j);
}

}  // namespace anglers
