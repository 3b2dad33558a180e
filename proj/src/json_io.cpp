#include "mrange/json_io.hpp"

#include <cmath>
#include <string>

namespace mrange {

namespace {

double finite_number(const json& j) {
    if (!j.is_number()) throw Error(ErrorKind::BadJson, "expected a number, got " + j.dump());
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw Error(ErrorKind::BadJson, "non-finite number");
    return v;
}

}  // namespace

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
    if (j.is_number()) return {finite_number(j), 0.0};
    if (!j.is_array() || j.size() != 2) throw Error(ErrorKind::BadJson, "complex entries are [re, im] pairs");
    return {finite_number(j[0]), finite_number(j[1])};
}

json matrix_to_json(const CMat& m) {
    json data = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(complex_to_json(m(r, c)));
    }
    json out;
    out["rows"] = m.rows();
    out["cols"] = m.cols();
    out["data"] = std::move(data);
    return out;
}

CMat matrix_from_json(const json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data")) {
        throw Error(ErrorKind::BadJson, "matrix needs rows, cols and data");
    }
    if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer()) {
        throw Error(ErrorKind::BadJson, "rows and cols must be integers");
    }
    const long long rows = j["rows"].get<long long>(), cols = j["cols"].get<long long>();
    if (rows < 0 || cols < 0) throw Error(ErrorKind::BadJson, "negative matrix dimensions");
    const json& data = j["data"];
    if (!data.is_array() || static_cast<long long>(data.size()) != rows * cols) {
        throw Error(ErrorKind::BadJson, "data length must equal rows * cols");
    }
    CMat m(rows, cols);
    for (long long r = 0; r < rows; ++r) {
        for (long long c = 0; c < cols; ++c) m(r, c) = complex_from_json(data[static_cast<std::size_t>(r * cols + c)]);
    }
    return m;
}

json complex_list_to_json(const std::vector<cplx>& v) {
    json out = json::array();
    for (const cplx& z : v) out.push_back(complex_to_json(z));
    return out;
}

std::vector<cplx> complex_list_from_json(const json& j) {
    if (!j.is_array()) throw Error(ErrorKind::BadJson, "expected a list of complex numbers");
    std::vector<cplx> out;
    for (const json& e : j) out.push_back(complex_from_json(e));
    return out;
}

json matrix_list_to_json(const std::vector<CMat>& v) {
    json out = json::array();
    for (const CMat& m : v) out.push_back(matrix_to_json(m));
    return out;
}

std::vector<CMat> matrix_list_from_json(const json& j) {
    if (!j.is_array()) throw Error(ErrorKind::BadJson, "expected a list of matrices");
    std::vector<CMat> out;
    for (const json& e : j) out.push_back(matrix_from_json(e));
    return out;
}

}  // namespace mrange
