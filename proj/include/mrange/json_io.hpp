// Matrix interchange: {"rows": r, "cols": c, "data": [[re, im], ...]} with
// row-major data.
#pragma once

#include <json.hpp>

#include <vector>

#include "mrange/linalg.hpp"

namespace mrange {

using json = nlohmann::ordered_json;

json matrix_to_json(const CMat& m);
CMat matrix_from_json(const json& j);

json complex_to_json(cplx z);
cplx complex_from_json(const json& j);

json complex_list_to_json(const std::vector<cplx>& v);
std::vector<cplx> complex_list_from_json(const json& j);

json matrix_list_to_json(const std::vector<CMat>& v);
std::vector<CMat> matrix_list_from_json(const json& j);

}  // namespace mrange
