#include "webgeom/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "webgeom/error.hpp"

namespace webgeom {

void AnalysisConfig::validate() const {
  for (double t : {tol_connection, tol_identity, tol_classify, pivot})
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("tolerances must be positive");
  if (jet_order < 4) throw std::invalid_argument("jet_order must be at least 4");
  if (frame_row2 && (!std::isfinite((*frame_row2)[0]) || !std::isfinite((*frame_row2)[1])))
    throw std::invalid_argument("frame_row2 must be finite");
}

ClassifyTolerances AnalysisConfig::classify_tolerances() const {
  return {tol_classify, tol_classify, pivot};
}

AnalysisConfig AnalysisConfig::from_json_text(std::string_view text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  AnalysisConfig c;
  for (const auto& [key, v] : j.items()) {
    if (key == "tol_connection") c.tol_connection = v.get<double>();
    else if (key == "tol_identity") c.tol_identity = v.get<double>();
    else if (key == "tol_classify") c.tol_classify = v.get<double>();
    else if (key == "pivot") c.pivot = v.get<double>();
    else if (key == "jet_order") c.jet_order = v.get<int>();
    else if (key == "frame_row2") {
      if (!v.is_null()) c.frame_row2 = v.get<std::array<double, 2>>();
    } else if (key == "output") {
      const auto s = v.get<std::string>();
      if (s == "json") c.output = Output::Json;
      else if (s == "text") c.output = Output::Text;
      else throw std::invalid_argument("output must be \"text\" or \"json\"");
    } else {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
  c.validate();
  return c;
}

PointAnalysis analyze_point(const WebDefinition& web, const BasePoint& p, const AnalysisConfig& cfg) {
  PointAnalysis out;
  out.point = p;
  const CoframeJet cf = build_coframe(web, p, cfg.jet_order, cfg.pivot);
  out.chern = solve_chern(cf, cfg.tol_connection, cfg.pivot);
  out.tensors = compute_tensors(out.chern, cfg.tol_connection, &out.curvature_check);
  out.report = classify(out.tensors, cfg.frame_row2, cfg.classify_tolerances());
  return out;
}

bool VerifyReport::all_pass() const {
  return std::all_of(lines.begin(), lines.end(), [](const CheckLine& l) { return l.pass; });
}

Injection Injection::parse(std::string_view spec) {
  const auto eq = spec.find('=');
  if (eq == std::string_view::npos)
    throw Error(ErrorCode::SyntaxError, "injection must look like b1211=+1");
  const std::string_view lhs = spec.substr(0, eq);
  std::string rhs(spec.substr(eq + 1));
  if (!rhs.empty() && rhs[0] == '+') rhs.erase(0, 1);

  static const std::pair<std::string_view, int> ranks[] = {
      {"pbar", 3}, {"ptil", 3}, {"qbar", 3}, {"qtil", 3}, {"bbar", 5},
      {"btil", 5}, {"a", 1},    {"p", 2},    {"q", 2},    {"b", 4}};
  Injection inj;
  for (const auto& [name, rank] : ranks) {
    if (lhs.substr(0, name.size()) != name) continue;
    const std::string_view digits = lhs.substr(name.size());
    if (digits.size() != static_cast<std::size_t>(rank)) continue;
    inj.tensor = std::string(name);
    for (char ch : digits) {
      if (ch != '1' && ch != '2')
        throw Error(ErrorCode::SyntaxError, "injection indices must be 1 or 2: '" + std::string(lhs) + "'");
      inj.indices.push_back(ch - '1');
    }
    break;
  }
  if (inj.tensor.empty())
    throw Error(ErrorCode::SyntaxError, "unknown injection target '" + std::string(lhs) + "'");
  char* end = nullptr;
  inj.delta = std::strtod(rhs.c_str(), &end);
  if (rhs.empty() || end != rhs.c_str() + rhs.size() || !std::isfinite(inj.delta))
    throw Error(ErrorCode::SyntaxError, "injection amount '" + rhs + "' is not a number");
  return inj;
}

void Injection::apply(WebTensors& t) const {
  const auto& x = indices;
  if (tensor == "a") t.a(x[0]) += delta;
  else if (tensor == "p") t.p(x[0], x[1]) += delta;
  else if (tensor == "q") t.q(x[0], x[1]) += delta;
  else if (tensor == "b") t.b(x[0], x[1], x[2], x[3]) += delta;
  else if (tensor == "pbar") t.pbar(x[0], x[1], x[2]) += delta;
  else if (tensor == "ptil") t.ptil(x[0], x[1], x[2]) += delta;
  else if (tensor == "qbar") t.qbar(x[0], x[1], x[2]) += delta;
  else if (tensor == "qtil") t.qtil(x[0], x[1], x[2]) += delta;
  else if (tensor == "bbar") t.bbar(x[0], x[1], x[2], x[3], x[4]) += delta;
  else if (tensor == "btil") t.btil(x[0], x[1], x[2], x[3], x[4]) += delta;
}

std::vector<BasePoint> seeded_points(const BasePoint& p, int count, double radius) {
  std::mt19937_64 rng(0x5eed0001u);
  std::vector<BasePoint> out;
  for (int n = 0; n < count; ++n) {
    BasePoint q = p;
    for (double& c : q.coords) {
      // Map the raw 64-bit draw to [-1, 1) without relying on distribution internals.
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      c += radius * (2.0 * u - 1.0);
    }
    out.push_back(q);
  }
  return out;
}

namespace {

class Battery {
 public:
  void add(const std::string& family, double residual, double bound) {
    auto it = index_.find(family);
    if (it == index_.end()) {
      index_[family] = lines_.size();
      lines_.push_back({family, residual, bound, residual <= bound});
      ratio_.push_back(residual / bound);
      return;
    }
    CheckLine& line = lines_[it->second];
    line.pass = line.pass && residual <= bound;
    if (residual / bound > ratio_[it->second]) {
      ratio_[it->second] = residual / bound;
      line.residual = residual;
      line.tolerance = bound;
    }
  }
  std::vector<CheckLine> lines() const { return lines_; }

 private:
  std::map<std::string, std::size_t> index_;
  std::vector<CheckLine> lines_;
  std::vector<double> ratio_;
};

double max_diff(const WebTensors& x, const WebTensors& y) {
  double m = 0.0;
  for (int i = 0; i < 2; ++i) m = std::max(m, std::abs(x.a(i) - y.a(i)));
  for (std::size_t k = 0; k < 4; ++k) {
    m = std::max(m, std::abs(x.p.flat_at(k) - y.p.flat_at(k)));
    m = std::max(m, std::abs(x.q.flat_at(k) - y.q.flat_at(k)));
  }
  for (std::size_t k = 0; k < 16; ++k) m = std::max(m, std::abs(x.b.flat_at(k) - y.b.flat_at(k)));
  return m;
}

void verify_point(Battery& bat, const WebDefinition& web, const BasePoint& pt, const AnalysisConfig& cfg,
                  const std::vector<Injection>& injections) {
  const CoframeJet cf = build_coframe(web, pt, cfg.jet_order, cfg.pivot);
  const ChernData cd = solve_chern(cf, cfg.tol_connection, cfg.pivot);
  CurvatureCheck cc;
  WebTensors t = compute_tensors(cd, cfg.tol_connection, &cc);
  for (const auto& inj : injections) inj.apply(t);

  const double tc = cfg.tol_connection;
  bat.add("structure_equations", cd.structure_residual, tc * (1.0 + cd.scale));
  bat.add("torsion_determinations", cd.a_determination_gap, tc * (1.0 + cd.scale));
  bat.add("coframe_pure_part", cd.pure_part_residual, tc * (1.0 + cd.scale));
  bat.add("curvature_pure_part", cc.pure_part, tc * (1.0 + cc.scale));
  {
    const Tensor<1> back = torsion_covector(torsion_tensor(t.a));
    const double r = std::max(std::abs(back(0) - t.a(0)), std::abs(back(1) - t.a(1)));
    bat.add("torsion_normal_form", r, tc * (1.0 + max_abs(t.a)));
  }
  for (const auto& f : verify_identities(t).families)
    bat.add(f.name, f.residual, cfg.tol_identity * (1.0 + f.scale));

  const ClassifyTolerances tol = cfg.classify_tolerances();
  const double n = std::hypot(t.a(0), t.a(1));
  if (!(n >= tol.torsion)) return;

  const auto [F, s] = specialize_frame(t, cfg.frame_row2, tol);
  const double frame_tol = 1e-10;
  bat.add("frame_specialization", std::abs(s.a(1)), frame_tol * (1.0 + std::abs(s.a(0))));

  const FrameChange back = FrameChange::from_rows({F.Ainv(0, 0), F.Ainv(0, 1)}, {F.Ainv(1, 0), F.Ainv(1, 1)});
  const WebTensors round = transform_tensors(s, back);
  const double tscale = std::max({max_abs(t.a), max_abs(t.p), max_abs(t.q), max_abs(t.b)});
  bat.add("frame_roundtrip", max_diff(round, t), frame_tol * (1.0 + tscale));

  const double a1 = t.a(0), a2 = t.a(1);
  const double c1 = F.A(1, 0), c2 = F.A(1, 1);
  const double d2 = F.D * F.D;
  const double cn = std::hypot(c1, c2);
  const double pscale = (1.0 + max_abs(t.p)) * (1.0 + n * n) * (1.0 + n * cn);
  bat.add("frame_p21_formula",
          std::abs(d2 * s.p(1, 0) - (c1 * (a2 * t.p(0, 1) - a1 * t.p(1, 1)) + c2 * (a1 * t.p(1, 0) - a2 * t.p(0, 0)))),
          frame_tol * pscale);
  const double rp = a2 * a2 * t.p(0, 0) - a1 * a2 * (t.p(0, 1) + t.p(1, 0)) + a1 * a1 * t.p(1, 1);
  bat.add("frame_p22_identity", std::abs(d2 * s.p(1, 1) - rp), frame_tol * pscale);

  const InvariantB inv = invariant_b(t, F, tol.torsion);
  const double bscale = 1.0 + max_abs(t.b) * std::pow(n, 4) / std::pow(std::abs(F.D), 3);
  bat.add("invariant_expansion", inv.expansion_residual, cfg.tol_identity * bscale);
  if (inv.poly_residual) bat.add("invariant_polynomial", *inv.poly_residual, cfg.tol_identity * bscale);

  const HexagonalityResult hex = check_hexagonal(t, F, tol, /*theorem_mode=*/false);
  double hr = 0.0;
  for (int i = 0; i < 2; ++i)
    hr = std::max(hr, std::abs(F.A(i, 0) * hex.contraction[0] + F.A(i, 1) * hex.contraction[1] -
                               hex.specialized_components[i]));
  bat.add("hexagonality_specialized", hr, frame_tol * (1.0 + max_abs(t.b) * (1.0 + n * n)));

  const bool integrable = check_integrability(s, tol).flag;
  const bool geodesic = check_totally_geodesic(s, tol).flag;
  bat.add("totally_geodesic_equivalence", integrable == geodesic ? 0.0 : 1.0, 0.5);
}

}  // namespace

VerifyReport verify_web(const WebDefinition& web, const BasePoint& p, const AnalysisConfig& cfg, int seeds,
                        const std::vector<Injection>& injections) {
  Battery bat;
  std::vector<BasePoint> points{p};
  for (const auto& q : seeded_points(p, seeds)) points.push_back(q);
  for (const auto& q : points) verify_point(bat, web, q, cfg, injections);
  VerifyReport r;
  r.lines = bat.lines();
  r.points = static_cast<int>(points.size());
  return r;
}

}  // namespace webgeom
