#pragma once

#include <json.hpp>

#include "pmconv/distance.hpp"
#include "pmconv/stability.hpp"

namespace pmconv {

using json = nlohmann::json;

json barcode_to_json(const Barcode& b);
Barcode barcode_from_json(const json& j);

json graded_barcode_to_json(const GradedBarcode& b);
GradedBarcode graded_barcode_from_json(const json& j);

json module_to_json(const PersistenceModule& m);
PersistenceModule module_from_json(const json& j);

json distance_to_json(const DistanceResult& d);

SimplicialComplex complex_from_json(const json& j);
VertexFunction vertex_function_from_json(const json& j, size_t vertex_count);

json stability_report_to_json(const StabilityReport& r);

}  // namespace pmconv
