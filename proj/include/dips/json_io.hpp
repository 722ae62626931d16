#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dips/bounds.hpp"
#include "dips/constants.hpp"
#include "dips/linalg.hpp"
#include "dips/permutation.hpp"
#include "dips/statistics.hpp"
#include "dips/tensor4.hpp"
#include "dips/verify.hpp"

namespace dips {

using json = nlohmann::json;

// Tensor schema: {"n": int, "m": int (optional, defaults to n),
//                 "form": "dense" | "product",
//                 "data": [flat row-major] | {"c": [[...]], "a": [[...]]}}
json tensor_to_json(const Tensor4& t);
Tensor4 tensor_from_json(const json& j);

json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

// permutations serialize as 0-based integer arrays
json permutation_to_json(const Permutation& p);
Permutation permutation_from_json(const json& j);

json curve_to_json(const TailCurve& c);
std::string curve_to_csv(const TailCurve& c);  // header "t,bound,raw"

json tail_to_json(const EmpiricalTail& t);
std::string tail_to_csv(const EmpiricalTail& t);  // header "t,survival,upper"

json report_to_json(const VerificationReport& r);

json interval_to_json(const Interval& iv);
json bound_constants_to_json(const BoundConstants& c);
json decomposition_constants_to_json(const DecompositionConstants& c);
json regression_constants_to_json(const RegressionConstants& c);

// file helpers
json load_json_file(const std::string& path);
void save_text_file(const std::string& path, const std::string& text);
void save_json_file(const std::string& path, const json& j);

Tensor4 load_tensor_file(const std::string& path);

// CSV with header "x,y"
Sample load_sample_csv(const std::string& path);
// CSV with header "z" (pooled one-column data)
std::vector<double> load_pooled_csv(const std::string& path);

// Graph file {"n": int, "edges": [[u,v], ...]} with 1-based vertices;
// converted to 0-based internally. Undirected graphs supply both
// orientations explicitly.
struct GraphData {
    std::size_t n = 0;
    std::vector<std::pair<int, int>> edges;
};
GraphData load_graph_file(const std::string& path);

}  // namespace dips
