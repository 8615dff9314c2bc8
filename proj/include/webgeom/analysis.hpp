#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "webgeom/expr.hpp"
#include "webgeom/invariants.hpp"
#include "webgeom/prolong.hpp"

namespace webgeom {

struct AnalysisConfig {
  double tol_connection = 1e-9;
  double tol_identity = 1e-8;
  double tol_classify = 1e-7;
  /// Determinants and divisors below this are treated as singular.
  double pivot = 1e-12;
  int jet_order = 4;
  std::optional<std::array<double, 2>> frame_row2;
  enum class Output { Text, Json } output = Output::Text;

  /// Throws std::invalid_argument on a non-positive tolerance or jet_order < 4.
  void validate() const;
  ClassifyTolerances classify_tolerances() const;
  /// Reads keys tol_connection, tol_identity, tol_classify, pivot, jet_order,
  /// frame_row2 ([c1, c2]) and output ("text" | "json"); others are rejected.
  static AnalysisConfig from_json_text(std::string_view text);
};

struct PointAnalysis {
  BasePoint point;
  ChernData chern;
  CurvatureCheck curvature_check;
  WebTensors tensors;
  ClassificationReport report;
};

/// Full pipeline at one point: coframe, Chern connection, tensors, classification.
PointAnalysis analyze_point(const WebDefinition& web, const BasePoint& p, const AnalysisConfig& cfg);

struct CheckLine {
  std::string family;
  double residual = 0.0;
  double tolerance = 0.0;  // absolute bound actually applied
  bool pass = true;
};

struct VerifyReport {
  std::vector<CheckLine> lines;
  int points = 0;
  bool all_pass() const;
};

/// Additive corruption of one tensor component, e.g. "b1211=+1" (1-based
/// indices; tensors a, p, q, b, pbar, ptil, qbar, qtil, bbar, btil).
struct Injection {
  std::string tensor;
  std::vector<int> indices;  // 0-based
  double delta = 0.0;

  static Injection parse(std::string_view spec);
  void apply(WebTensors& t) const;
};

/// Runs every residual check at p and at `seeds` extra points drawn around p.
VerifyReport verify_web(const WebDefinition& web, const BasePoint& p, const AnalysisConfig& cfg,
                        int seeds = 0, const std::vector<Injection>& injections = {});

/// The seeded points used by verify_web (deterministic).
std::vector<BasePoint> seeded_points(const BasePoint& p, int count, double radius = 0.05);

}  // namespace webgeom
