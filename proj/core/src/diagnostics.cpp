#include "fdlab/diagnostics.hpp"

#include <nlohmann/json.hpp>

#include <stdexcept>

namespace fdlab {

std::string to_json(const PicardReport& r) {
  nlohmann::json j;
  j["iterates_used"] = r.iterates_used;
  j["increment_norms"] = r.increment_norms;
  j["envelope"] = r.envelope;
  j["certified_bound"] = r.certified_bound;
  j["envelope_constant"] = r.envelope_constant;
  j["envelope_rate"] = r.envelope_rate;
  j["level"] = r.level;
  j["nodes"] = r.nodes;
  j["refinement_change"] = r.refinement_change;
  return j.dump();
}

std::string to_json(const ContourReport& r) {
  nlohmann::json j;
  j["theta0"] = r.theta0;
  j["eps"] = r.eps;
  j["r_min"] = r.r_min;
  j["R"] = r.R;
  j["step"] = r.step;
  j["ray_nodes"] = r.ray_nodes;
  j["arc_nodes"] = r.arc_nodes;
  j["resolvent_iterations"] = r.resolvent_iterations;
  j["max_residual"] = r.max_residual;
  j["tail_change"] = r.tail_change;
  return j.dump();
}

std::string to_json(const DecayFit& fit, std::string_view theorem_case) {
  nlohmann::json j;
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["window"] = {fit.t_min, fit.t_max};
  j["points"] = fit.points;
  j["residual"] = fit.max_residual;
  j["theorem_case"] = std::string(theorem_case);
  return j.dump();
}

JsonLinesWriter::JsonLinesWriter(const std::filesystem::path& path) : out_(path, std::ios::app) {
  if (!out_) throw std::runtime_error("cannot open " + path.string());
}

void JsonLinesWriter::write(std::string_view event, std::string_view json_object) {
  nlohmann::json j;
  j["event"] = std::string(event);
  j["data"] = nlohmann::json::parse(json_object);
  out_ << j.dump() << '\n';
  out_.flush();
}

}  // namespace fdlab
