#include "dips/json_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dips {

json tensor_to_json(const Tensor4& t) {
    json j;
    j["n"] = t.n();
    if (t.m() != t.n()) j["m"] = t.m();
    if (t.form() == Tensor4::Form::dense) {
        j["form"] = "dense";
        j["data"] = t.values();
    } else {
        j["form"] = "product";
        j["data"] = json{{"c", matrix_to_json(t.c())}, {"a", matrix_to_json(t.a())}};
    }
    return j;
}

Tensor4 tensor_from_json(const json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("form") || !j.contains("data"))
        throw std::invalid_argument("tensor: expected {n, form, data}");
    const std::size_t n = j.at("n").get<std::size_t>();
    const std::size_t m = j.contains("m") ? j.at("m").get<std::size_t>() : n;
    const std::string form = j.at("form").get<std::string>();
    if (form == "dense") {
        std::vector<double> data = j.at("data").get<std::vector<double>>();
        return Tensor4::dense(n, m, std::move(data));
    }
    if (form == "product") {
        const json& d = j.at("data");
        if (!d.contains("c") || !d.contains("a"))
            throw std::invalid_argument("tensor: product form needs data.c and data.a");
        Matrix c = matrix_from_json(d.at("c"));
        Matrix a = matrix_from_json(d.at("a"));
        if (c.rows != n || c.cols != m)
            throw std::invalid_argument("tensor: factor shape does not match n, m");
        return Tensor4::product(std::move(c), std::move(a));
    }
    throw std::invalid_argument("tensor: form must be 'dense' or 'product'");
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols; ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix: expected nested arrays");
    const std::size_t rows = j.size();
    const std::size_t cols = j.at(0).size();
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        const json& row = j.at(i);
        if (!row.is_array() || row.size() != cols)
            throw std::invalid_argument("matrix: ragged rows");
        for (std::size_t c = 0; c < cols; ++c) m(i, c) = row.at(c).get<double>();
    }
    return m;
}

json permutation_to_json(const Permutation& p) { return json(p.map); }

Permutation permutation_from_json(const json& j) {
    return Permutation::from_map(j.get<std::vector<int>>());
}

json curve_to_json(const TailCurve& c) {
    json consts = json::object();
    for (const auto& [k, v] : c.constants) consts[k] = v;
    return json{{"label", c.label},       {"constants", consts}, {"grid", c.grid},
                {"bound", c.bound},       {"raw", c.raw},        {"clamped", c.clamped_anywhere}};
}

std::string curve_to_csv(const TailCurve& c) {
    std::ostringstream out;
    out.precision(17);
    out << "t,bound,raw\n";
    for (std::size_t i = 0; i < c.grid.size(); ++i)
        out << c.grid[i] << "," << c.bound[i] << "," << c.raw[i] << "\n";
    return out.str();
}

json tail_to_json(const EmpiricalTail& t) {
    return json{{"grid", t.grid},
                {"survival", t.survival},
                {"half_width", t.half_width},
                {"mode", t.exact ? "exact" : "mc"},
                {"replicates", t.replicates},
                {"seed", t.seed}};
}

std::string tail_to_csv(const EmpiricalTail& t) {
    std::ostringstream out;
    out.precision(17);
    out << "t,survival,upper\n";
    for (std::size_t i = 0; i < t.grid.size(); ++i)
        out << t.grid[i] << "," << t.survival[i] << "," << t.survival[i] + t.half_width << "\n";
    return out.str();
}

json report_to_json(const VerificationReport& r) {
    json details = json::object();
    for (const auto& [k, v] : r.details) details[k] = v;
    json j{{"name", r.name},     {"status", verdict_name(r.status)},
           {"statistic", r.statistic}, {"margin", r.margin},
           {"size", r.size},     {"seed", r.seed},
           {"details", details}};
    if (!r.witness.empty()) j["witness"] = r.witness;
    return j;
}

json interval_to_json(const Interval& iv) {
    return json{{"lower", iv.lower}, {"upper", iv.upper}, {"method", method_name(iv.method)}};
}

namespace {

json tagged_to_json(const TaggedValue& t) {
    return json{{"value", t.value}, {"method", method_name(t.method)}};
}

}  // namespace

json bound_constants_to_json(const BoundConstants& c) {
    json j{{"frob", tagged_to_json(c.frob)},
           {"B", interval_to_json(c.b)},
           {"V", tagged_to_json(c.v)}};
    if (c.opnorm) j["opnorm"] = tagged_to_json(*c.opnorm);
    if (c.nu) j["nu"] = tagged_to_json(*c.nu);
    return j;
}

json decomposition_constants_to_json(const DecompositionConstants& c) {
    return json{{"V_a", {{"value", c.v_a}, {"method", "closed-form"}}},
                {"B_a", {{"value", c.b_a}, {"method", "closed-form"}}},
                {"V_d", {{"value", c.v_d}, {"method", "closed-form"}}},
                {"B_d", interval_to_json(c.b_d)}};
}

json regression_constants_to_json(const RegressionConstants& c) {
    return json{{"frob2", {{"value", c.frob2}, {"method", "exact"}}},
                {"opnorm", interval_to_json(c.opnorm)},
                {"hat_diag", c.hat_diag},
                {"denominator_exact", {{"v", c.v_exact}, {"b", c.b_exact}}},
                {"denominator_relaxed", {{"v", c.v_relaxed}, {"b", c.b_relaxed}}}};
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("malformed JSON in '" + path + "': " + e.what());
    }
    return j;
}

void save_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write '" + path + "'");
    out << text;
}

void save_json_file(const std::string& path, const json& j) {
    save_text_file(path, j.dump(2) + "\n");
}

Tensor4 load_tensor_file(const std::string& path) {
    return tensor_from_json(load_json_file(path));
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        // trim
        const auto b = field.find_first_not_of(" \t\r");
        const auto e = field.find_last_not_of(" \t\r");
        fields.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    return fields;
}

double parse_double(const std::string& s, std::size_t line_no) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (...) {
        throw std::invalid_argument("CSV: bad number '" + s + "' on line " +
                                    std::to_string(line_no));
    }
}

}  // namespace

Sample load_sample_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("CSV: empty file");
    auto header = split_csv_line(line);
    if (header.size() != 2 || header[0] != "x" || header[1] != "y")
        throw std::invalid_argument("CSV: expected header 'x,y'");
    std::vector<double> x, y;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 2)
            throw std::invalid_argument("CSV: expected two fields on line " +
                                        std::to_string(line_no));
        x.push_back(parse_double(fields[0], line_no));
        y.push_back(parse_double(fields[1], line_no));
    }
    return Sample::make(std::move(x), std::move(y));
}

std::vector<double> load_pooled_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("CSV: empty file");
    auto header = split_csv_line(line);
    if (header.size() != 1 || header[0] != "z")
        throw std::invalid_argument("CSV: expected header 'z'");
    std::vector<double> z;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 1)
            throw std::invalid_argument("CSV: expected one field on line " +
                                        std::to_string(line_no));
        z.push_back(parse_double(fields[0], line_no));
    }
    return z;
}

GraphData load_graph_file(const std::string& path) {
    const json j = load_json_file(path);
    if (!j.contains("n") || !j.contains("edges"))
        throw std::invalid_argument("graph: expected {n, edges}");
    GraphData g;
    g.n = j.at("n").get<std::size_t>();
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2)
            throw std::invalid_argument("graph: each edge must be [u, v]");
        const int u = e.at(0).get<int>();
        const int v = e.at(1).get<int>();
        if (u < 1 || v < 1 || static_cast<std::size_t>(u) > g.n ||
            static_cast<std::size_t>(v) > g.n)
            throw std::invalid_argument("graph: vertices are 1-based in [1, n]");
        g.edges.emplace_back(u - 1, v - 1);
    }
    return g;
}

}  // namespace dips
