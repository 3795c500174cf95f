#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qmirror/bethe.hpp"
#include "qmirror/branes.hpp"
#include "qmirror/core.hpp"
#include "qmirror/mirror.hpp"

namespace qmirror {

using json = nlohmann::json;

inline constexpr const char* kSchema = "qmirror/1";

// complex numbers travel as [re, im]; a bare real is accepted on input
json cplx_json(cplx z);
cplx json_cplx(const json& j);
json cvec_json(const CVec& v);
CVec json_cvec(const json& j);

json quiver_json(const Quiver& q);
Quiver json_quiver(const json& j);  // InvalidArgument on malformed input
json params_json(const ModelParams& p);
ModelParams json_params(const json& j);

json solutions_json(const std::vector<BetheSolution>& sols);
std::vector<BetheSolution> json_solutions(const json& j);

json linking_json(const Quiver& q);  // dual, partitions and positional numbers
json report_json(const MirrorReport& r);
MirrorReport json_report(const json& j);

json read_json_file(const std::string& path);                   // InvalidArgument on failure
void write_output(const json& j, const std::string& path);      // stdout when path is empty
std::string dump(const json& j);

}  // namespace qmirror
