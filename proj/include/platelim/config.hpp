#pragma once

// Run configuration: a JSON key-value tree mapping onto the law, prestrain,
// surface, quadrature, and sweep descriptors. Parsing is strict (unknown
// families fail with the offending field path) and serialization is
// canonical, so parse -> serialize -> parse is the identity.

#include <json.hpp>

#include <fstream>
#include <optional>

#include "platelim/ansatz.hpp"
#include "platelim/prestrain.hpp"
#include "platelim/surface.hpp"

namespace platelim {

using Json = nlohmann::json;

struct LawConfig {
  std::string family = "isotropic";
  double mu = 1.0;
  double lambda = 1.0;
};

struct PrestrainConfig {
  bool abar_identity = true;
  Mat3 abar = Mat3::Identity();
  std::string b_kind = "poly";  // poly | layers
  std::vector<Mat3> coeffs;     // poly coefficients (symmetric 3x3)
  std::vector<double> breaks;
  std::vector<Mat3> values;
};

struct SurfaceConfig {
  std::string family = "plane";  // plane | cylinder | sphere
  double radius = 2.0;
  int nx = 32, ny = 32;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
};

struct SweepConfig {
  std::vector<double> h_list = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  double gamma = 0.4;
  double k_shift = 1.0;
  Mat2 s = Mat2::Zero();
  double max_final_rel_error = 0.02;
};

struct RunConfig {
  LawConfig law;
  PrestrainConfig prestrain;
  SurfaceConfig surface;
  int quadrature_nodes = 16;
  SweepConfig sweep;
  double isometry_tol = 1e-3;
  std::uint64_t seed = 12345;
  int threads = 1;
};

namespace detail {

inline Mat3 mat3_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(path + ": expected 3x3 array");
  Mat3 m;
  for (int r = 0; r < 3; ++r) {
    if (!j[r].is_array() || j[r].size() != 3)
      throw ConfigError(path + ": expected 3x3 array");
    for (int c = 0; c < 3; ++c) m(r, c) = j[r][c].get<double>();
  }
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw ConfigError(path + ": matrix must be symmetric");
  return m;
}

inline Json mat3_to_json(const Mat3& m) {
  Json j = Json::array();
  for (int r = 0; r < 3; ++r) {
    Json row = Json::array();
    for (int c = 0; c < 3; ++c) row.push_back(m(r, c));
    j.push_back(row);
  }
  return j;
}

inline Mat2 mat2_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(path + ": expected 2x2 array");
  Mat2 m;
  for (int r = 0; r < 2; ++r) {
    if (!j[r].is_array() || j[r].size() != 2)
      throw ConfigError(path + ": expected 2x2 array");
    for (int c = 0; c < 2; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

inline Json mat2_to_json(const Mat2& m) {
  Json j = Json::array();
  for (int r = 0; r < 2; ++r) j.push_back(Json::array({m(r, 0), m(r, 1)}));
  return j;
}

}  // namespace detail

inline RunConfig parse_config(const Json& j) {
  RunConfig cfg;
  try {
    if (j.contains("law")) {
      const Json& l = j.at("law");
      cfg.law.family = l.value("family", "isotropic");
      cfg.law.mu = l.value("mu", 1.0);
      cfg.law.lambda = l.value("lambda", 1.0);
      if (cfg.law.family != "isotropic" && cfg.law.family != "dist" &&
          cfg.law.family != "unstable-quadratic")
        throw ConfigError("law.family: unknown family '" + cfg.law.family + "'");
    }
    if (j.contains("prestrain")) {
      const Json& p = j.at("prestrain");
      if (p.contains("abar") && p.at("abar").is_array()) {
        cfg.prestrain.abar_identity = false;
        cfg.prestrain.abar = detail::mat3_from_json(p.at("abar"), "prestrain.abar");
      }
      if (p.contains("b")) {
        const Json& b = p.at("b");
        cfg.prestrain.b_kind = b.value("kind", "poly");
        if (cfg.prestrain.b_kind == "poly") {
          for (std::size_t k = 0; k < b.at("coeffs").size(); ++k)
            cfg.prestrain.coeffs.push_back(
                detail::mat3_from_json(b.at("coeffs")[k], "prestrain.b.coeffs"));
        } else if (cfg.prestrain.b_kind == "layers") {
          cfg.prestrain.breaks = b.at("breaks").get<std::vector<double>>();
          for (std::size_t k = 0; k < b.at("values").size(); ++k)
            cfg.prestrain.values.push_back(
                detail::mat3_from_json(b.at("values")[k], "prestrain.b.values"));
        } else {
          throw ConfigError("prestrain.b.kind: expected poly or layers");
        }
      }
    }
    if (j.contains("surface")) {
      const Json& s = j.at("surface");
      cfg.surface.family = s.value("family", "plane");
      if (cfg.surface.family != "plane" && cfg.surface.family != "cylinder" &&
          cfg.surface.family != "sphere")
        throw ConfigError("surface.family: unknown family '" + cfg.surface.family + "'");
      cfg.surface.radius = s.value("radius", 2.0);
      if (s.contains("grid")) {
        cfg.surface.nx = s.at("grid")[0].get<int>();
        cfg.surface.ny = s.at("grid")[1].get<int>();
      }
      if (s.contains("domain")) {
        cfg.surface.x0 = s.at("domain")[0][0].get<double>();
        cfg.surface.x1 = s.at("domain")[0][1].get<double>();
        cfg.surface.y0 = s.at("domain")[1][0].get<double>();
        cfg.surface.y1 = s.at("domain")[1][1].get<double>();
      }
    }
    if (j.contains("quadrature")) cfg.quadrature_nodes = j.at("quadrature").value("nodes", 16);
    if (j.contains("sweep")) {
      const Json& s = j.at("sweep");
      if (s.contains("h_list")) cfg.sweep.h_list = s.at("h_list").get<std::vector<double>>();
      cfg.sweep.gamma = s.value("gamma", 0.4);
      cfg.sweep.k_shift = s.value("K", 1.0);
      if (s.contains("s")) cfg.sweep.s = detail::mat2_from_json(s.at("s"), "sweep.s");
      cfg.sweep.max_final_rel_error = s.value("max_final_rel_error", 0.02);
    }
    if (j.contains("tolerances"))
      cfg.isometry_tol = j.at("tolerances").value("isometry", 1e-3);
    cfg.seed = j.value("seed", std::uint64_t{12345});
    cfg.threads = j.value("threads", 1);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (cfg.quadrature_nodes < 1) throw ConfigError("quadrature.nodes: must be >= 1");
  for (std::size_t i = 0; i + 1 < cfg.sweep.h_list.size(); ++i)
    if (!(cfg.sweep.h_list[i] > cfg.sweep.h_list[i + 1]))
      throw ConfigError("sweep.h_list: must be strictly decreasing");
  return cfg;
}

inline RunConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  Json j;
  try {
    f >> j;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return parse_config(j);
}

inline Json serialize_config(const RunConfig& cfg) {
  Json j;
  j["law"] = {{"family", cfg.law.family}, {"mu", cfg.law.mu}, {"lambda", cfg.law.lambda}};
  Json p;
  if (!cfg.prestrain.abar_identity) p["abar"] = detail::mat3_to_json(cfg.prestrain.abar);
  Json b;
  b["kind"] = cfg.prestrain.b_kind;
  if (cfg.prestrain.b_kind == "poly") {
    Json coeffs = Json::array();
    for (const auto& c : cfg.prestrain.coeffs) coeffs.push_back(detail::mat3_to_json(c));
    b["coeffs"] = coeffs;
  } else {
    b["breaks"] = cfg.prestrain.breaks;
    Json values = Json::array();
    for (const auto& v : cfg.prestrain.values) values.push_back(detail::mat3_to_json(v));
    b["values"] = values;
  }
  p["b"] = b;
  j["prestrain"] = p;
  j["surface"] = {{"family", cfg.surface.family},
                  {"radius", cfg.surface.radius},
                  {"grid", {cfg.surface.nx, cfg.surface.ny}},
                  {"domain", {{cfg.surface.x0, cfg.surface.x1}, {cfg.surface.y0, cfg.surface.y1}}}};
  j["quadrature"] = {{"nodes", cfg.quadrature_nodes}};
  j["sweep"] = {{"h_list", cfg.sweep.h_list},
                {"gamma", cfg.sweep.gamma},
                {"K", cfg.sweep.k_shift},
                {"s", detail::mat2_to_json(cfg.sweep.s)},
                {"max_final_rel_error", cfg.sweep.max_final_rel_error}};
  j["tolerances"] = {{"isometry", cfg.isometry_tol}};
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  return j;
}

// --- Builders from the parsed descriptors. ---

inline ElasticLaw build_law(const LawConfig& law) {
  if (law.family == "dist") return builtin_dist_law();
  if (law.family == "isotropic") return builtin_isotropic_quadratic(law.mu, law.lambda);
  return unstable_quadratic(law.mu, law.lambda);
}

inline TProfile build_profile(const PrestrainConfig& p) {
  if (p.b_kind == "layers") {
    std::vector<SymMat3> vals;
    for (const auto& v : p.values) vals.emplace_back(v);
    return TProfile::layers(p.breaks, vals);
  }
  std::vector<SymMat3> coeffs;
  for (const auto& c : p.coeffs) coeffs.emplace_back(c);
  if (coeffs.empty()) coeffs.emplace_back();
  return TProfile::poly(coeffs);
}

inline PrestrainField build_prestrain(const PrestrainConfig& p) {
  const SymMat3 abar = p.abar_identity ? SymMat3::identity() : SymMat3(p.abar);
  return PrestrainField::uniform(abar, build_profile(p));
}

inline SurfaceFamily build_surface_family(const SurfaceConfig& s) {
  if (s.family == "plane") return SurfaceFamily::plane();
  if (s.family == "cylinder") return SurfaceFamily::cylinder(s.radius);
  return SurfaceFamily::sphere_patch(s.radius);
}

inline Grid2 build_grid(const SurfaceConfig& s) {
  return Grid2::box(s.x0, s.x1, s.y0, s.y1, s.nx, s.ny);
}

}  // namespace platelim
