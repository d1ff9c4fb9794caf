// anglers: angle structures on ideally triangulated 3-manifolds with
// totally geodesic boundary.
//
// Subcommands:
//   validate <tri.json>
//   angles find|verify|perturb ...
//   volume eval|maximize ...
//   surface check <tri.json> <angles.json> <surface.json>
//   layered build <decomposition.json> [--geometry]
//
// Exit codes: 0 success, 1 mathematical negative (infeasible / failed check),
// 2 input error.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "anglers/anglers.hpp"

namespace {

using namespace anglers;

constexpr int kExitOk = 0;
constexpr int kExitMathNo = 1;
constexpr int kExitInput = 2;

double env_tolerance() {
  if (const char* v = std::getenv("ANGLERS_TOL")) {
    try {
      return std::stod(v);
    } catch (...) {
      throw IOError("ANGLERS_TOL is not a number");
    }
  }
  return default_tolerances().verify;
}

IdealTriangulation load_triangulation(const std::string& path, BuildOptions opts = {}) {
  auto data = triangulation_from_json(read_json_file(path));
  return IdealTriangulation::build(data.tet_count, data.gluings, opts);
}

int cmd_validate(const std::string& tri_path) {
  TriangulationData data;
  try {
    data = triangulation_from_json(read_json_file(tri_path));
  } catch (const IOError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  }
  ValidationReport rep = validate(data.tet_count, data.gluings);
  if (rep.built) {
    std::cout << "edge classes (" << rep.edge_table.size() << "):\n";
    for (const auto& cls : rep.edge_table) {
      std::cout << "  class " << cls.id << "  valence " << cls.valence() << "  corners";
      for (const auto& c : cls.corners) std::cout << " " << c.tet << "." << c.edge;
      std::cout << "\n";
    }
    std::cout << "boundary components (" << rep.boundary.size() << "):\n";
    for (const auto& b : rep.boundary)
      std::cout << "  component " << b.id << "  chi " << b.euler_characteristic << "  (V,E,F)=("
                << b.vertices << "," << b.edges << "," << b.faces << ")\n";
  }
  for (const auto& issue : rep.issues)
    std::cout << (issue.failure ? "FAIL: " : "warning: ") << issue.message << "\n";
  if (rep.ok()) {
    std::cout << "valid\n";
    return kExitOk;
  }
  return kExitMathNo;
}

int cmd_angles_find(const std::string& tri_path, const std::string& out_path,
                    const std::string& cert_path, bool exact_output) {
  auto tri = load_triangulation(tri_path);
  AnglePolytope poly = build_polytope(tri);
  LPOutcome res = solve(poly);
  std::cout << "status: " << lp_status_name(res.status) << "\n";
  std::cout << "optimal slack s* = " << format_rational(res.s_star) << " pi\n";
  if (res.witness) {
    AngleAssignment out = *res.witness;
    if (!exact_output) {
      std::vector<double> flt(out.size());
      for (int i = 0; i < out.size(); ++i) flt[i] = out.radians(i);
      out = AngleAssignment::floating(std::move(flt));
    }
    write_json_file(out_path, angles_to_json(out));
    std::cout << "witness written to " << out_path << "\n";
  }
  if (res.certificate) {
    write_json_file(cert_path, certificate_to_json(poly, *res.certificate));
    std::cout << "Farkas certificate written to " << cert_path << "\n";
  }
  return res.status == LPStatus::strictly_feasible ? kExitOk : kExitMathNo;
}

int cmd_angles_verify(const std::string& tri_path, const std::string& angles_path, double tol) {
  auto tri = load_triangulation(tri_path);
  auto file = angles_from_json(read_json_file(angles_path), tri.corner_count());
  if (file.tags) {
    PartiallyFlatAssignment beta{file.assignment, *file.tags};
    auto rep = validate_partially_flat(tri, beta, tol);
    for (const auto& f : rep.failures) std::cout << "FAIL: " << f << "\n";
    std::cout << (rep.pass ? "valid partially flat assignment\n" : "invalid\n");
    return rep.pass ? kExitOk : kExitMathNo;
  }
  auto rep = verify(tri, file.assignment, tol);
  std::cout << "max edge residual: " << rep.max_edge_residual << "\n";
  std::cout << "min vertex margin: " << rep.min_vertex_margin << "\n";
  std::cout << "min angle: " << rep.min_angle << "\n";
  for (const auto& f : rep.failures) std::cout << "FAIL: " << f << "\n";
  std::cout << (rep.pass ? "valid strict angle structure\n" : "invalid\n");
  return rep.pass ? kExitOk : kExitMathNo;
}

int cmd_angles_perturb(const std::string& tri_path, const std::string& beta_path,
                       const std::string& t_str, const std::string& out_path, double tol) {
  auto tri = load_triangulation(tri_path);
  auto file = angles_from_json(read_json_file(beta_path), tri.corner_count());
  if (!file.tags) throw IOError("perturb needs a partially flat angle file with tags");
  PartiallyFlatAssignment beta{file.assignment, *file.tags};
  auto pf = validate_partially_flat(tri, beta, tol);
  if (!pf.pass) {
    for (const auto& f : pf.failures) std::cout << "FAIL: " << f << "\n";
    return kExitMathNo;
  }
  try {
    if (beta.values.exact_mode()) {
      auto tm = t_max(tri, beta);
      Rational t = t_str.empty() ? tm.value / 2 : parse_rational(t_str);
      std::cout << "t_max = " << format_rational(tm.value) << " pi (binding: " << tm.binding
                << ")\n";
      std::cout << "using t = " << format_rational(t) << " pi\n";
      AngleAssignment alpha = perturb(tri, beta, t);
      write_json_file(out_path, angles_to_json(alpha));
      auto rep = verify(tri, alpha, tol);
      std::cout << (rep.pass ? "strict angle structure written to " : "verification FAILED: ")
                << out_path << "\n";
      return rep.pass ? kExitOk : kExitMathNo;
    }
    auto tm = t_max_float(tri, beta, tol);
    double t = t_str.empty() ? tm.value / 2 : std::stod(t_str);
    std::cout << "t_max = " << tm.value << " rad (binding: " << tm.binding << ")\n";
    std::cout << "using t = " << t << " rad\n";
    AngleAssignment alpha = perturb_float(tri, beta, t, tol);
    write_json_file(out_path, angles_to_json(alpha));
    auto rep = verify(tri, alpha, std::max(tol, 1e-9));
    std::cout << (rep.pass ? "strict angle structure written to " : "verification FAILED: ")
              << out_path << "\n";
    return rep.pass ? kExitOk : kExitMathNo;
  } catch (const Lemma41Error& e) {
    std::cout << "FAIL: " << e.what() << "\n";
    return kExitMathNo;
  }
}

int cmd_volume_eval(const std::string& tri_path, const std::string& angles_path, int threads,
                    const std::string& report_path) {
  auto tri = load_triangulation(tri_path);
  auto file = angles_from_json(read_json_file(angles_path), tri.corner_count());
  auto rep = verify(tri, file.assignment, env_tolerance());
  if (!rep.pass) {
    std::cerr << "input error: assignment is not a strict angle structure\n";
    return kExitInput;
  }
  VolumeReport vr = total_volume(tri, file.assignment, threads);
  json out = volume_report_to_json(vr);
  std::cout << canonical_dump(out);
  if (!report_path.empty()) write_json_file(report_path, out);
  return kExitOk;
}

int cmd_volume_maximize(const std::string& tri_path, const std::string& angles_path,
                        MaximizeOptions opt, const std::string& out_path,
                        const std::string& report_path) {
  auto tri = load_triangulation(tri_path);
  auto file = angles_from_json(read_json_file(angles_path), tri.corner_count());
  auto rep = verify(tri, file.assignment, env_tolerance());
  if (!rep.pass) {
    std::cerr << "input error: assignment is not a strict angle structure\n";
    return kExitInput;
  }
  MaximizeResult res = maximize(tri, file.assignment, opt);
  json report = volume_report_to_json(res.report);
  report["status"] = ascent_status_name(res.status);
  report["iterations"] = res.iterations;
  report["monotone"] = res.monotone;
  if (!res.pinned_constraints.empty()) report["pinned"] = res.pinned_constraints;
  std::cout << canonical_dump(report);
  if (res.status == AscentStatus::boundary)
    std::cout << "warning: maximum pinned at the polytope boundary\n";
  write_json_file(out_path, angles_to_json(res.angles));
  if (!report_path.empty()) write_json_file(report_path, report);
  return kExitOk;
}

int cmd_surface_check(const std::string& tri_path, const std::string& angles_path,
                      const std::string& surface_path) {
  auto tri = load_triangulation(tri_path);
  auto file = angles_from_json(read_json_file(angles_path), tri.corner_count());
  auto rep = verify(tri, file.assignment, env_tolerance());
  if (!rep.pass) {
    std::cerr << "input error: assignment is not a strict angle structure\n";
    return kExitInput;
  }
  if (!file.assignment.exact_mode()) {
    std::cerr << "input error: surface checks need a rational-pi angle file\n";
    return kExitInput;
  }
  SurfaceComplex surf = surface_from_json(read_json_file(surface_path));

  auto adm = check_admissibility(tri, surf);
  for (const auto& v : adm.violations) std::cout << "admissibility: " << v << "\n";
  // derive with gluing checks: encoding inconsistencies exit 2
  derive_surface(tri, surf, true);

  auto theta = inner_angles(tri, surf, file.assignment);
  auto lemma = lemma_3_2_check(tri, surf, theta);
  for (const auto& f : lemma.failures) std::cout << "lemma 3.2: " << f << "\n";
  auto prop = prop_3_3_verdict(tri, surf, theta);
  std::cout << "chi_combinatorial = " << prop.chi << "\n";
  std::cout << "chi_angle = " << format_rational(prop.chi_angle) << "\n";
  for (const auto& f : prop.failures) std::cout << "prop 3.3: " << f << "\n";
  std::cout << "disk types:";
  for (const auto& d : surf.disks) std::cout << " " << disk_type_name(classify_disk(d));
  std::cout << "\n";
  if (prop.is_edge_tube)
    std::cout << "verdict: tube (chi = 0, all disks type IV)\n";
  else
    std::cout << "verdict: chi = " << prop.chi << (prop.chi < 0 ? " < 0" : "") << "\n";
  bool pass = adm.pass && lemma.pass && prop.pass();
  return pass ? kExitOk : kExitMathNo;
}

int cmd_layered_build(const std::string& decomp_path, bool geometry,
                      const std::string& prefix) {
  Decomposition dec = decomposition_from_json(read_json_file(decomp_path));
  LayeredOutput out = build_layered(dec, geometry ? BuildMode::geometric : BuildMode::combinatorial);
  std::cout << "tetrahedra: " << out.triangulation.tet_count() << " (" << out.flat_count
            << " flat)\n";
  write_json_file(prefix + ".tri.json", triangulation_to_json(out.triangulation));
  std::cout << "triangulation written to " << prefix << ".tri.json\n";
  json prov = json::array();
  for (std::size_t t = 0; t < out.provenance.size(); ++t) {
    const auto& p = out.provenance[t];
    json pj;
    pj["tet"] = t;
    if (p.kind == TetProvenance::Kind::cone) {
      pj["kind"] = "cone";
      pj["cell"] = p.cell;
      pj["apex"] = p.apex_id;
      pj["base_face"] = p.base_face;
      pj["base_vertex"] = p.base_vertex_id;
    } else {
      pj["kind"] = "flat";
      pj["pairing"] = p.pairing;
      pj["switch"] = p.switch_index;
      pj["vertices"] = p.quad_vertex_ids;
    }
    prov.push_back(pj);
  }
  write_json_file(prefix + ".provenance.json", prov);
  std::cout << "provenance written to " << prefix << ".provenance.json\n";
  if (out.beta) {
    write_json_file(prefix + ".beta.json", angles_to_json(out.beta->values, &out.beta->tags));
    std::cout << "inherited angles written to " << prefix << ".beta.json\n";
  } else {
    json tags = json::object();
    for (std::size_t t = 0; t < out.tags.size(); ++t)
      tags[std::to_string(t)] = tag_name(out.tags[t]);
    write_json_file(prefix + ".tags.json", json{{"tags", tags}});
    std::cout << "tags written to " << prefix << ".tags.json\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"angle structures on ideally triangulated 3-manifolds with totally geodesic "
               "boundary"};
  app.require_subcommand(1);

  std::string tri_path, angles_path, surface_path, beta_path, decomp_path;
  std::string out_path, cert_path = "certificate.json", report_path, t_str, prefix = "layered";
  bool exact_output = true, geometry = false;
  double tol = 0;  // resolved against ANGLERS_TOL at dispatch
  MaximizeOptions mopt;

  auto* validate_cmd = app.add_subcommand("validate", "validate a triangulation file");
  validate_cmd->add_option("triangulation", tri_path)->required();

  auto* angles_cmd = app.add_subcommand("angles", "angle structure operations");
  angles_cmd->require_subcommand(1);
  auto* find_cmd = angles_cmd->add_subcommand("find", "decide strict feasibility exactly");
  find_cmd->add_option("triangulation", tri_path)->required();
  find_cmd->add_option("-o,--output", out_path, "witness angle file")->capture_default_str();
  find_cmd->add_option("--certificate", cert_path, "Farkas certificate file")
      ->capture_default_str();
  find_cmd->add_flag("--exact,!--no-exact", exact_output, "write rational-pi witness (default)");
  auto* verify_cmd = angles_cmd->add_subcommand("verify", "check an angle file");
  verify_cmd->add_option("triangulation", tri_path)->required();
  verify_cmd->add_option("angles", angles_path)->required();
  verify_cmd->add_option("--tol", tol, "float-mode residual tolerance");
  auto* perturb_cmd =
      angles_cmd->add_subcommand("perturb", "deform a partially flat assignment (alpha_t)");
  perturb_cmd->add_option("triangulation", tri_path)->required();
  perturb_cmd->add_option("beta", beta_path)->required();
  perturb_cmd->add_option("--t", t_str, "parameter t (rational 'p/q' in pi units, default t_max/2)");
  perturb_cmd->add_option("-o,--output", out_path, "output angle file");
  perturb_cmd->add_option("--tol", tol, "float-mode tolerance");

  auto* volume_cmd = app.add_subcommand("volume", "volume functional");
  volume_cmd->require_subcommand(1);
  auto* eval_cmd = volume_cmd->add_subcommand("eval", "evaluate the total volume");
  eval_cmd->add_option("triangulation", tri_path)->required();
  eval_cmd->add_option("angles", angles_path)->required();
  eval_cmd->add_option("--threads", mopt.threads);
  eval_cmd->add_option("--report", report_path, "also write the report JSON here");
  auto* max_cmd = volume_cmd->add_subcommand("maximize", "projected gradient ascent");
  max_cmd->add_option("triangulation", tri_path)->required();
  max_cmd->add_option("angles", angles_path)->required();
  max_cmd->add_option("--tol", mopt.tol, "projected-gradient tolerance")->capture_default_str();
  max_cmd->add_option("--max-iters", mopt.max_iters)->capture_default_str();
  max_cmd->add_option("--guard", mopt.guard, "strictness margin guard")->capture_default_str();
  max_cmd->add_option("--threads", mopt.threads);
  max_cmd->add_option("-o,--output", out_path, "final angle file");
  max_cmd->add_option("--report", report_path);

  auto* surface_cmd = app.add_subcommand("surface", "admissible surface checks");
  surface_cmd->require_subcommand(1);
  auto* check_cmd = surface_cmd->add_subcommand("check", "admissibility + Euler characteristics");
  check_cmd->add_option("triangulation", tri_path)->required();
  check_cmd->add_option("angles", angles_path)->required();
  check_cmd->add_option("surface", surface_path)->required();

  auto* layered_cmd = app.add_subcommand("layered", "layered triangulations");
  layered_cmd->require_subcommand(1);
  auto* build_cmd = layered_cmd->add_subcommand("build", "subdivide a polyhedral decomposition");
  build_cmd->add_option("decomposition", decomp_path)->required();
  build_cmd->add_flag("--geometry", geometry, "compute the inherited angles from coordinates");
  build_cmd->add_option("--output-prefix", prefix)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    double tol_resolved = (tol > 0) ? tol : env_tolerance();
    if (validate_cmd->parsed()) return cmd_validate(tri_path);
    if (find_cmd->parsed()) {
      if (out_path.empty()) out_path = "witness.json";
      return cmd_angles_find(tri_path, out_path, cert_path, exact_output);
    }
    if (verify_cmd->parsed()) return cmd_angles_verify(tri_path, angles_path, tol_resolved);
    if (perturb_cmd->parsed()) {
      if (out_path.empty()) out_path = "perturbed.json";
      return cmd_angles_perturb(tri_path, beta_path, t_str, out_path, tol_resolved);
    }
    if (eval_cmd->parsed())
      return cmd_volume_eval(tri_path, angles_path, mopt.threads, report_path);
    if (max_cmd->parsed()) {
      if (out_path.empty()) out_path = "maximized.json";
      return cmd_volume_maximize(tri_path, angles_path, mopt, out_path, report_path);
    }
    if (check_cmd->parsed()) return cmd_surface_check(tri_path, angles_path, surface_path);
    if (build_cmd->parsed()) return cmd_layered_build(decomp_path, geometry, prefix);
  } catch (const IOError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const TriangulationError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const SurfaceEncodingError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Lemma41Error& e) {
    std::cerr << e.what() << "\n";
    return kExitMathNo;
  } catch (const LayeredError& e) {
    // geometric failures (edge sums, segment test) are mathematical negatives
    std::cerr << e.what() << "\n";
    return kExitMathNo;
  } catch (const GeometryError& e) {
    std::cerr << e.what() << "\n";
    return kExitMathNo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
