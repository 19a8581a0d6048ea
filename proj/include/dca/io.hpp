#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "dca/certificates.hpp"
#include "dca/probe.hpp"

namespace dca::io {

using nlohmann::json;

json ext_to_json(double v);
double ext_from_json(const json& j);

json to_json(const DcParams& params);
DcParams params_from_json(const json& j);

json to_json(const FunctionSpec& spec);
FunctionSpec function_from_json(const json& j, const CurvatureClass& declared);

json to_json(const DcInstance& instance);
DcInstance instance_from_json(const json& j);

json to_json(const Trajectory& traj);
Trajectory trajectory_from_json(const json& j);

json to_json(const std::vector<Triplet>& triplets);
std::vector<Triplet> triplets_from_json(const json& j);

json to_json(const RegimeCertificate& cert);
json to_json(const InterpReport& report);
json to_json(const TrajectoryReport& report);
json to_json(const PepVariables& vars);
PepVariables pep_from_json(const json& j);
json to_json(const ProbeResult& result);

void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
void write_regime_map_csv(std::ostream& out, const std::vector<RegimeMapRow>& rows);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace dca::io
