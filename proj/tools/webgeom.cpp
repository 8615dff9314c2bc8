// webgeom: analyze three-webs z = f(x, y) at a point, run the residual
// battery, and print the involution character tables.

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "webgeom/analysis.hpp"
#include "webgeom/error.hpp"
#include "webgeom/involution.hpp"
#include "webgeom/report.hpp"

namespace {

using namespace webgeom;

enum Exit : int { kOk = 0, kVerifyFailed = 1, kDegenerate = 2, kParse = 3, kUsage = 64 };

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::SyntaxError:
    case ErrorCode::UnknownVariable:
    case ErrorCode::NonIntegerExponent:
    case ErrorCode::ArityError:
      return kParse;
    case ErrorCode::SingularEvaluation:
    case ErrorCode::SingularMatrix:
    case ErrorCode::NotAWebAtPoint:
    case ErrorCode::DistributionUndefined:
    case ErrorCode::DegenerateFrameChange:
      return kDegenerate;
    case ErrorCode::ChernInconsistency:
    case ErrorCode::CurvaturePurePartNonzero:
    case ErrorCode::PreconditionNotMet:
      return kVerifyFailed;
    case ErrorCode::UnknownScenario:
      return kUsage;
  }
  return kVerifyFailed;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::SyntaxError, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

WebDefinition load_web(const std::string& path) {
  try {
    return parse_web(read_file(path));
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.detail());
  }
}

std::vector<BasePoint> load_points(const std::string& path) {
  std::vector<BasePoint> pts;
  std::istringstream in(read_file(path));
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      pts.push_back(parse_point(line));
    } catch (const Error& e) {
      throw Error(e.code(), path + ":" + std::to_string(n) + ": " + e.detail());
    }
  }
  return pts;
}

Json error_json(const Error& e) {
  Json j;
  j["name"] = std::string(error_name(e.code()));
  j["message"] = e.detail();
  return j;
}

struct AnalyzeOptions {
  std::string web;
  std::string point;
  std::string points;
  std::string config;
  bool json = false;
  bool dump_tensors = false;
  double tol_classify = 0.0;
};

struct VerifyOptions {
  std::string web;
  std::string point;
  std::string config;
  int seeds = 0;
  std::vector<std::string> inject;
  bool json = false;
};

AnalysisConfig load_config(const std::string& path) {
  if (path.empty()) return {};
  try {
    return AnalysisConfig::from_json_text(read_file(path));
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::SyntaxError, path + ": " + e.what());
  }
}

int run_analyze(const AnalyzeOptions& o) {
  AnalysisConfig cfg = load_config(o.config);
  if (o.json) cfg.output = AnalysisConfig::Output::Json;
  if (o.tol_classify > 0.0) cfg.tol_classify = o.tol_classify;
  cfg.validate();
  const WebDefinition web = load_web(o.web);
  const bool json = cfg.output == AnalysisConfig::Output::Json;

  if (!o.points.empty()) {
    const std::vector<BasePoint> pts = load_points(o.points);
    struct Outcome {
      std::optional<PointAnalysis> result;
      std::optional<Error> error;
    };
    std::vector<std::future<Outcome>> jobs;
    for (const auto& p : pts)
      jobs.push_back(std::async(std::launch::async, [&web, &cfg, p]() -> Outcome {
        try {
          return {analyze_point(web, p, cfg), std::nullopt};
        } catch (const Error& e) {
          return {std::nullopt, e};
        }
      }));
    int code = kOk;
    Json all = Json::array();
    for (std::size_t k = 0; k < jobs.size(); ++k) {
      const Outcome out = jobs[k].get();
      if (out.error) code = std::max(code, exit_code_for(out.error->code()));
      if (json) {
        if (out.result) {
          all.push_back(analysis_json(web, *out.result, cfg, o.dump_tensors));
        } else {
          Json e;
          e["point_index"] = k;
          e["error"] = error_json(*out.error);
          all.push_back(e);
        }
      } else {
        if (k) std::cout << "\n";
        if (out.result)
          std::cout << analysis_text(web, *out.result);
        else
          std::cout << "point " << k << ": error: " << out.error->what() << "\n";
      }
    }
    if (json) std::cout << dump_json(all);
    return code;
  }

  const PointAnalysis a = analyze_point(web, parse_point(o.point), cfg);
  if (json)
    std::cout << dump_json(analysis_json(web, a, cfg, o.dump_tensors));
  else
    std::cout << analysis_text(web, a);
  return kOk;
}

int run_verify(const VerifyOptions& o) {
  AnalysisConfig cfg = load_config(o.config);
  if (o.json) cfg.output = AnalysisConfig::Output::Json;
  const WebDefinition web = load_web(o.web);
  std::vector<Injection> inj;
  for (const auto& s : o.inject) inj.push_back(Injection::parse(s));
  const VerifyReport r = verify_web(web, parse_point(o.point), cfg, o.seeds, inj);
  if (cfg.output == AnalysisConfig::Output::Json)
    std::cout << dump_json(verify_json(r));
  else
    std::cout << verify_text(r);
  return r.all_pass() ? kOk : kVerifyFailed;
}

int run_characters(const std::string& which, bool json) {
  std::vector<Scenario> scenarios;
  if (which == "all")
    scenarios = all_scenarios();
  else
    scenarios.push_back(scenario_by_name(which));
  std::vector<CharacterTable> tables;
  bool ok = true;
  for (const auto& s : scenarios) {
    tables.push_back(character_table(s));
    if (!s.soft && !tables.back().involutive) ok = false;
  }
  std::cout << (json ? dump_json(characters_json(tables)) : characters_text(tables));
  return ok ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chern connection, invariants and involution counts for four-dimensional three-webs"};
  app.require_subcommand(1);

  AnalyzeOptions ao;
  auto* analyze = app.add_subcommand("analyze", "Classify a web at a point (or a batch of points)");
  analyze->add_option("--web", ao.web, "Web definition file")->required();
  auto* pt = analyze->add_option("--point", ao.point, "Base point \"x1,x2,y1,y2\"");
  auto* pts = analyze->add_option("--points", ao.points, "File with one point per line");
  pt->excludes(pts);
  analyze->add_option("--config", ao.config, "JSON configuration file");
  analyze->add_flag("--json", ao.json, "Emit the JSON report");
  analyze->add_flag("--dump-tensors", ao.dump_tensors, "Include raw tensors in the JSON report");
  analyze->add_option("--tol-classify", ao.tol_classify, "Classification threshold")
      ->check(CLI::PositiveNumber);

  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify", "Run the residual battery");
  verify->add_option("--web", vo.web, "Web definition file")->required();
  verify->add_option("--point", vo.point, "Base point \"x1,x2,y1,y2\"")->required();
  verify->add_option("--seeds", vo.seeds, "Extra seeded points around the base point")
      ->check(CLI::NonNegativeNumber);
  verify->add_option("--inject", vo.inject, "Corrupt a tensor component, e.g. b1211=+1");
  verify->add_option("--config", vo.config, "JSON configuration file");
  verify->add_flag("--json", vo.json, "Emit JSON");

  std::string scenario = "all";
  bool chars_json = false;
  auto* chars = app.add_subcommand("characters", "Print Cartan character tables");
  chars->add_option("--scenario", scenario, "thm3, thm7, thm8, s22 or all");
  chars->add_flag("--json", chars_json, "Emit JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*analyze) {
      if (ao.point.empty() && ao.points.empty()) {
        std::cerr << "error: analyze needs --point or --points\n";
        return kUsage;
      }
      return run_analyze(ao);
    }
    if (*verify) return run_verify(vo);
    return run_characters(scenario, chars_json);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
