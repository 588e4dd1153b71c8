#include "polext/io.hpp"

#include <fstream>
#include <sstream>

#include "polext/errors.hpp"

namespace polext::io {

using extrema::ExtremaSet;
using extrema::ExtremalPoint;
using systems::VectorSystem;

json system_to_json(const VectorSystem& sys) {
  json doc;
  doc["dim"] = sys.dim();
  doc["label"] = sys.label();
  doc["vectors"] = sys.vectors();
  doc["normalize"] = false;
  return doc;
}

VectorSystem system_from_json(const json& doc) {
  try {
    const auto dim = doc.at("dim").get<std::size_t>();
    auto vectors = doc.at("vectors").get<std::vector<std::vector<double>>>();
    const std::string label = doc.value("label", std::string{});
    const bool normalize = doc.value("normalize", false);
    if (normalize) return VectorSystem::normalized(dim, std::move(vectors), label);
    return VectorSystem(dim, std::move(vectors), label);
  } catch (const json::exception& e) {
    throw LoadError(std::string("malformed system document: ") + e.what());
  } catch (const DimensionError& e) {
    throw LoadError(std::string("invalid system: ") + e.what());
  }
}

json extrema_to_json(const ExtremaSet& es) {
  json doc;
  doc["system"] = system_to_json(es.system);
  json points = json::array();
  for (const auto& p : es.points) {
    json jp;
    jp["u"] = p.u;
    jp["pattern"] = p.pattern.signs;
    jp["P"] = p.value_P;
    jp["S"] = p.value_S;
    jp["mu"] = p.weight_mu;
    jp["residual"] = p.fixed_point_residual;
    jp["newton_iters"] = p.newton_iters;
    points.push_back(std::move(jp));
  }
  doc["points"] = std::move(points);
  doc["expected_count"] = es.expected_count ? json(*es.expected_count) : json(nullptr);
  doc["complete"] = es.complete;
  return doc;
}

ExtremaSet extrema_from_json(const json& doc) {
  try {
    ExtremaSet es{system_from_json(doc.at("system")), {}, std::nullopt, false};
    for (const auto& jp : doc.at("points")) {
      ExtremalPoint p;
      p.u = jp.at("u").get<std::vector<double>>();
      p.pattern.signs = jp.at("pattern").get<std::vector<int>>();
      p.value_P = jp.at("P").get<double>();
      p.value_S = jp.at("S").get<double>();
      p.weight_mu = jp.at("mu").get<double>();
      p.fixed_point_residual = jp.at("residual").get<double>();
      p.newton_iters = jp.value("newton_iters", 0);
      if (p.u.size() != es.system.dim() || p.pattern.size() != es.system.size())
        throw LoadError("extremal point does not match the system shape");
      es.points.push_back(std::move(p));
    }
    const auto& ec = doc.at("expected_count");
    if (!ec.is_null()) es.expected_count = ec.get<std::uint64_t>();
    es.complete = doc.at("complete").get<bool>();
    return es;
  } catch (const json::exception& e) {
    throw LoadError(std::string("malformed extrema document: ") + e.what());
  }
}

json report_to_json(const certify::CertificationReport& rep) {
  json doc;
  doc["label"] = rep.label;
  doc["n"] = rep.n;
  doc["dim"] = rep.dim;
  doc["point_count"] = rep.point_count;
  doc["ej_theorem_residual"] = rep.ej_theorem_residual;
  doc["ej_general_residuals"] = rep.ej_general_residuals;
  doc["min_S"] = rep.min_S;
  doc["argmin_S"] = rep.argmin_S;
  doc["n_squared"] = static_cast<double>(rep.n * rep.n);
  doc["max_absP"] = rep.max_absP;
  doc["argmax_absP"] = rep.argmax_absP;
  doc["strong_holds"] = rep.strong_holds;
  doc["weak_holds"] = rep.weak_holds;
  doc["all_points_equality"] = rep.all_points_equality;
  doc["amgm_holds"] = rep.amgm_holds;
  doc["harmonicity_residual"] =
      rep.harmonicity_residual ? json(*rep.harmonicity_residual) : json(nullptr);
  doc["reflection_system"] = rep.reflection_system;
  doc["classification"] = certify::to_string(rep.classification);
  doc["gram_eigen_checks"] = rep.gram_eigen_checks;
  json points = json::array();
  for (const auto& r : rep.points) {
    json jp;
    jp["u"] = r.u;
    jp["pattern"] = r.pattern.signs;
    jp["eigen_rel"] = r.eigen_rel;
    jp["laplacian_id"] = r.laplacian_id;
    jp["jacobian_fact"] = r.jacobian_fact ? json(*r.jacobian_fact) : json(nullptr);
    jp["amgm"] = r.amgm;
    points.push_back(std::move(jp));
  }
  doc["points"] = std::move(points);
  json tol = json::object();
  for (const auto& [name, value] : rep.tolerances.as_map()) tol[name] = value;
  doc["tolerances"] = std::move(tol);
  doc["gates_passed"] = rep.gates_passed;
  doc["failed_gates"] = rep.failed_gates;
  return doc;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw LoadError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError("cannot write " + path.string());
  out << text;
  if (!out) throw LoadError("write failed for " + path.string());
}

}  // namespace polext::io
