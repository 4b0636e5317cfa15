// json_io.hpp - JSON schemas for every record type plus CSV row formatting.
// Serialization is deterministic: serialize -> parse -> serialize is
// byte-identical.
#pragma once

#include <string>

#include <json.hpp>

#include "dixmier/averaging.hpp"
#include "dixmier/duality.hpp"
#include "dixmier/instances.hpp"

namespace dixmier::io {

using json = nlohmann::json;

// {"blocks":[2,3]}
json to_json(const FdAlgebra& a);
FdAlgebra parse_algebra(const json& j);

// {"blocks":[ [[ [re,im], ... ], ...], ... ]} row-major nested arrays
json to_json(const Element& e);
Element parse_element(const json& j);

// {"entries":[element,...]}
json to_json(const Tuple& t);
Tuple parse_tuple(const json& j);

// {"weights":[...],"densities":[element-style blocks]}
json to_json(const State& s);
State parse_state(const json& j);

json to_json(const TracialState& t);
TracialState parse_tracial_state(const json& j);

// {"terms":[{"weight":w,"unitary":element},...]}
json to_json(const MixingOperator& t);
MixingOperator parse_mixing(const json& j);

json to_json(const Instance& inst);
Instance parse_instance(const json& j);

json to_json(const ConditionICertificate& cert);
json to_json(const DualityReport& rep);
DualityReport parse_duality_report(const json& j);
json to_json(const HMapReport& rep);

// Dense square complex matrix, rows of [re,im] pairs (H-map input).
json matrix_to_json(const Mat& m);
Mat parse_square_matrix(const json& j);

// Canonical text form used for files: 2-space indent plus trailing newline.
std::string dump(const json& j);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);
json load_file(const std::string& path);

// CSV row format shared by the CLI and the acceptance suite.
std::string duality_csv_header();
std::string duality_csv_row(const std::string& instance_id, const FdAlgebra& a, int m,
                            int n, const DualityReport& rep, double seconds);

}  // namespace dixmier::io
