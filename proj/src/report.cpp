#include "webgeom/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace webgeom {

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

bool scalar_array(const Json& j) {
  if (!j.is_array()) return false;
  for (const auto& e : j)
    if (e.is_structured()) return false;
  return true;
}

void write_scalar(std::ostringstream& os, const Json& j) {
  if (j.is_number_float()) {
    os << format_double(j.get<double>());
  } else {
    os << j.dump();
  }
}

void write(std::ostringstream& os, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  if (j.is_object()) {
    if (j.empty()) {
      os << "{}";
      return;
    }
    os << "{\n";
    bool first = true;
    for (const auto& [k, v] : j.items()) {
      if (!first) os << ",\n";
      first = false;
      os << inner << Json(k).dump() << ": ";
      write(os, v, indent + 1);
    }
    os << "\n" << pad << "}";
  } else if (j.is_array()) {
    if (j.empty()) {
      os << "[]";
      return;
    }
    if (scalar_array(j)) {
      os << "[";
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k) os << ", ";
        write_scalar(os, j[k]);
      }
      os << "]";
      return;
    }
    os << "[\n";
    for (std::size_t k = 0; k < j.size(); ++k) {
      if (k) os << ",\n";
      os << inner;
      write(os, j[k], indent + 1);
    }
    os << "\n" << pad << "]";
  } else {
    write_scalar(os, j);
  }
}

template <std::size_t R>
Json nested(const Tensor<R>& t, std::size_t offset, std::size_t depth) {
  Json out = Json::array();
  const std::size_t stride = std::size_t{1} << (R - depth - 1);
  for (std::size_t i = 0; i < 2; ++i) {
    if (depth + 1 == R)
      out.push_back(t.flat_at(offset + i));
    else
      out.push_back(nested(t, offset + i * stride, depth + 1));
  }
  return out;
}

Json json_or_null(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json frame_json(const FrameChange& f) {
  Json j;
  j["A"] = Json::array({Json::array({f.A(0, 0), f.A(0, 1)}), Json::array({f.A(1, 0), f.A(1, 1)})});
  j["D"] = f.D;
  return j;
}

template <std::size_t N>
Json verdict_json(const Verdict<N>& v, const std::vector<std::string>& names, std::string_view tag) {
  Json j;
  j["flag"] = v.flag;
  Json res;
  for (std::size_t k = 0; k < N; ++k) res[names[k]] = v.residuals[k];
  j["residuals"] = res;
  j["normalized"] = Json::array();
  for (double x : v.normalized) j["normalized"].push_back(x);
  j["frame_tag"] = tag;
  return j;
}

Json tensors_block(const WebTensors& t, bool with_prolongations) {
  Json j;
  j["frame_tag"] = frame_tag_name(t.frame);
  j["a"] = tensor_json(t.a);
  j["p"] = tensor_json(t.p);
  j["q"] = tensor_json(t.q);
  j["b"] = tensor_json(t.b);
  if (with_prolongations) {
    j["pbar"] = tensor_json(t.pbar);
    j["ptil"] = tensor_json(t.ptil);
    j["qbar"] = tensor_json(t.qbar);
    j["qtil"] = tensor_json(t.qtil);
    j["bbar"] = tensor_json(t.bbar);
    j["btil"] = tensor_json(t.btil);
  }
  return j;
}

}  // namespace

template <std::size_t R>
Json tensor_json(const Tensor<R>& t) {
  return nested(t, 0, 0);
}

template Json tensor_json<1>(const Tensor<1>&);
template Json tensor_json<2>(const Tensor<2>&);
template Json tensor_json<3>(const Tensor<3>&);
template Json tensor_json<4>(const Tensor<4>&);
template Json tensor_json<5>(const Tensor<5>&);

std::string dump_json(const Json& j) {
  std::ostringstream os;
  write(os, j, 0);
  os << "\n";
  return os.str();
}

Json analysis_json(const WebDefinition& web, const PointAnalysis& a, const AnalysisConfig& cfg,
                   bool dump_tensors) {
  const ClassificationReport& r = a.report;
  const WebTensors& t = a.tensors;
  Json j;
  Json w;
  w["name"] = web.name ? Json(*web.name) : Json(nullptr);
  w["f1"] = to_string(*web.f1);
  w["f2"] = to_string(*web.f2);
  j["web"] = w;
  j["point"] = Json::array({a.point.coords[0], a.point.coords[1], a.point.coords[2], a.point.coords[3]});
  j["tolerances"] = {{"connection", cfg.tol_connection},
                     {"identity", cfg.tol_identity},
                     {"classify", cfg.tol_classify},
                     {"pivot", cfg.pivot}};
  j["jet_order"] = cfg.jet_order;

  j["torsion"] = {{"a", tensor_json(t.a)}, {"norm", r.a_norm}, {"frame_tag", "pipeline"}};
  j["isoclinicly_geodesic"] = r.isoclinicly_geodesic;
  j["curvature"] = {{"max_abs_b", max_abs(t.b)}, {"frame_tag", "pipeline"}};

  j["frame_change"] = r.frame ? frame_json(*r.frame) : Json(nullptr);
  j["delta_integrable"] =
      r.delta_integrable ? verdict_json(*r.delta_integrable, {"p", "q"}, "pipeline") : Json(nullptr);
  j["geodesicly_parallel"] =
      r.geodesicly_parallel
          ? verdict_json(*r.geodesicly_parallel, {"p_12", "p_21", "q_12", "q_21"}, "pipeline")
          : Json(nullptr);
  j["totally_geodesic"] =
      r.totally_geodesic ? verdict_json(*r.totally_geodesic, {"p", "q"}, "specialized") : Json(nullptr);

  if (r.hexagonality) {
    const auto& h = *r.hexagonality;
    Json hj;
    hj["mode"] = h.theorem_applies ? "theorem" : "conditions_only";
    hj["flag"] = h.theorem_applies ? Json(h.conditions_hold) : Json(nullptr);
    hj["conditions_hold"] = h.conditions_hold;
    hj["contraction"] = Json::array({h.contraction[0], h.contraction[1]});
    hj["normalized"] = Json::array({h.normalized[0], h.normalized[1]});
    hj["specialized_components"] = Json::array({h.specialized_components[0], h.specialized_components[1]});
    hj["frame_tag"] = "pipeline";
    j["subwebs_hexagonal"] = hj;
    j["subweb_curvature"] = {{"K", h.subweb_curvature}, {"frame_tag", "specialized"}};
  } else {
    j["subwebs_hexagonal"] = nullptr;
    j["subweb_curvature"] = nullptr;
  }

  if (r.invariant) {
    Json pj;
    pj["flag"] = *r.principal_bivector;
    pj["invariant_b"] = r.invariant->value;
    pj["normalized"] = *r.principal_normalized;
    pj["expansion_residual"] = r.invariant->expansion_residual;
    pj["polynomial_residual"] = json_or_null(r.invariant->poly_residual);
    j["principal_bivector"] = pj;
  } else {
    j["principal_bivector"] = nullptr;
  }
  Json cj;
  cj["coefficients"] = Json::array();
  for (double c : r.conformal_poly) cj["coefficients"].push_back(c);
  cj["frame_tag"] = "pipeline";
  j["conformal_curvature"] = cj;

  j["checks"] = {{"structure_residual", a.chern.structure_residual},
                 {"torsion_gap", a.chern.a_determination_gap},
                 {"coframe_pure_part", a.chern.pure_part_residual},
                 {"curvature_pure_part", a.curvature_check.pure_part},
                 {"identity_max_residual", verify_identities(t).max_residual()}};

  if (dump_tensors) {
    Json tj;
    tj["pipeline"] = tensors_block(t, true);
    tj["specialized"] = r.specialized ? tensors_block(*r.specialized, false) : Json(nullptr);
    j["tensors"] = tj;
  }
  return j;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

}  // namespace

std::string analysis_text(const WebDefinition& web, const PointAnalysis& a) {
  const ClassificationReport& r = a.report;
  std::ostringstream os;
  os << "web: " << (web.name ? *web.name : std::string("(unnamed)")) << "\n";
  os << "  f1 = " << to_string(*web.f1) << "\n";
  os << "  f2 = " << to_string(*web.f2) << "\n";
  os << "point: (" << fmt(a.point.coords[0]) << ", " << fmt(a.point.coords[1]) << ", "
     << fmt(a.point.coords[2]) << ", " << fmt(a.point.coords[3]) << ")\n";
  os << "torsion a [pipeline]: (" << fmt(r.a(0)) << ", " << fmt(r.a(1)) << "), |a| = " << fmt(r.a_norm) << "\n";
  os << "isoclinicly geodesic: " << yes_no(r.isoclinicly_geodesic) << "\n";
  os << "max |b| [pipeline]: " << fmt(max_abs(a.tensors.b)) << "\n";
  if (r.isoclinicly_geodesic) {
    os << "transversal distribution: undefined (a = 0)\n";
  } else {
    const auto& di = *r.delta_integrable;
    os << "distribution integrable: " << yes_no(di.flag) << "  (r_p = " << fmt(di.residuals[0])
       << ", r_q = " << fmt(di.residuals[1]) << ")\n";
    os << "geodesicly parallel: " << yes_no(r.geodesicly_parallel->flag) << "\n";
    os << "totally geodesic [specialized]: " << yes_no(r.totally_geodesic->flag) << "\n";
    const auto& h = *r.hexagonality;
    os << "cut subwebs hexagonal: "
       << (h.theorem_applies ? yes_no(h.conditions_hold) : std::string("n/a (distribution not integrable)"))
       << "  (b^1 = " << fmt(h.contraction[0]) << ", b^2 = " << fmt(h.contraction[1]) << ")\n";
    os << "subweb curvature K [specialized]: " << fmt(h.subweb_curvature) << "\n";
    os << "invariant b: " << fmt(r.invariant->value) << "\n";
    os << "principal bivector: " << yes_no(*r.principal_bivector) << "\n";
  }
  os << "C(t) coefficients [C4..C0]:";
  for (double c : r.conformal_poly) os << " " << fmt(c);
  os << "\n";
  return os.str();
}

Json verify_json(const VerifyReport& r) {
  Json j;
  j["points"] = r.points;
  j["pass"] = r.all_pass();
  Json fams = Json::array();
  for (const auto& l : r.lines)
    fams.push_back({{"family", l.family}, {"residual", l.residual}, {"bound", l.tolerance}, {"pass", l.pass}});
  j["families"] = fams;
  return j;
}

std::string verify_text(const VerifyReport& r) {
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-30s %-12s %-12s %s\n", "family", "residual", "bound", "status");
  os << buf;
  for (const auto& l : r.lines) {
    std::snprintf(buf, sizeof buf, "%-30s %-12.3e %-12.3e %s\n", l.family.c_str(), l.residual, l.tolerance,
                  l.pass ? "ok" : "FAIL");
    os << buf;
  }
  os << "points checked: " << r.points << "\n";
  os << (r.all_pass() ? "all checks passed\n" : "verification FAILED\n");
  return os.str();
}

Json characters_json(const std::vector<CharacterTable>& tables) {
  Json arr = Json::array();
  for (const auto& t : tables) {
    Json j;
    j["scenario"] = t.scenario;
    j["q"] = t.q;
    j["s"] = Json::array({t.s1, t.s2, t.s3});
    j["Q"] = t.Q;
    j["N"] = t.N;
    j["involutive"] = t.involutive;
    j["informational"] = t.soft;
    j["p_block"] = t.p_block;
    j["b_block"] = t.b_block;
    j["notes"] = t.notes;
    arr.push_back(j);
  }
  return arr;
}

std::string characters_text(const std::vector<CharacterTable>& tables) {
  std::ostringstream os;
  int footnote = 0;
  std::ostringstream notes;
  for (const auto& t : tables) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-6s q=%d s=(%d,%d,%d) Q=%d N=%d %s", t.scenario.c_str(), t.q, t.s1, t.s2,
                  t.s3, t.Q, t.N, t.involutive ? "involutive" : "not involutive");
    os << buf;
    if (t.soft) os << " (informational)";
    for (const auto& n : t.notes) {
      ++footnote;
      os << " [" << footnote << "]";
      notes << "[" << footnote << "] " << t.scenario << ": " << n << "\n";
    }
    os << "\n";
  }
  return os.str() + notes.str();
}

}  // namespace webgeom
