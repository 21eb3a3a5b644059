#pragma once

#include "homkit/complex.hpp"
#include "homkit/equivalence.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace hk::cert {

using json = nlohmann::json;

/// Malformed certificate content.
class FormatError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

using Names = std::vector<std::string>;

json scalar_to_json(const Integer& x, const Names& names);
json scalar_to_json(const Rational& x, const Names& names);
json scalar_to_json(const Laurent& x, const Names& names);
void scalar_from_json(const json& j, const Names& names, Integer& out);
void scalar_from_json(const json& j, const Names& names, Rational& out);
void scalar_from_json(const json& j, const Names& names, Laurent& out);

/// "q^2", "q1*q2^-1", "1".
std::string monomial_key(const Monomial& m, const Names& names);
Monomial parse_monomial_key(const std::string& key, const Names& names);

template <class R> json matrix_to_json(const SparseMatrix<R>& m, const Names& names) {
    json entries = json::array();
    for (const auto& [i, j, v] : m.triplets()) entries.push_back(json::array({i, j, scalar_to_json(v, names)}));
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

template <class R> SparseMatrix<R> matrix_from_json(const json& j, const Names& names) {
    int rows = j.at("rows").get<int>(), cols = j.at("cols").get<int>();
    if (rows < 0 || cols < 0) throw FormatError("negative matrix shape");
    MatrixBuilder<R> b(rows, cols);
    std::vector<std::vector<int>> seen(cols);
    for (const auto& e : j.at("entries")) {
        if (!e.is_array() || e.size() != 3) throw FormatError("matrix entry must be [row, col, value]");
        int r = e[0].get<int>(), c = e[1].get<int>();
        if (r < 0 || r >= rows || c < 0 || c >= cols) throw FormatError("matrix entry out of range");
        for (int prev : seen[c])
            if (prev == r) throw FormatError("duplicate matrix entry");
        seen[c].push_back(r);
        R v;
        scalar_from_json(e[2], names, v);
        if (is_zero(v)) throw FormatError("stored zero in matrix");
        b.add(r, c, v);
    }
    return b.build();
}

template <class R> json complex_to_json(const Complex<R>& x, const Names& names) {
    json basis = json::array(), diffs = json::array();
    for (const auto& m : x.modules) basis.push_back(m.labels);
    for (const auto& d : x.diffs) diffs.push_back(matrix_to_json(d, names));
    return {{"lo", x.lo}, {"basis", std::move(basis)}, {"d", std::move(diffs)}};
}

template <class R> Complex<R> complex_from_json(const json& j, const Names& names) {
    Complex<R> x;
    x.lo = j.at("lo").get<int>();
    for (const auto& b : j.at("basis")) x.modules.push_back({b.get<std::vector<std::string>>()});
    for (const auto& d : j.at("d")) x.diffs.push_back(matrix_from_json<R>(d, names));
    if (!(x.modules.empty() && x.diffs.empty()) && x.diffs.size() + 1 != x.modules.size())
        throw FormatError("complex needs one differential between consecutive degrees");
    return x;
}

template <class R> json graded_to_json(const GradedMap<R>& f, const Names& names) {
    json blocks = json::object();
    for (const auto& [deg, m] : f.blocks) blocks[std::to_string(deg)] = matrix_to_json(m, names);
    return {{"shift", f.shift}, {"blocks", std::move(blocks)}};
}

template <class R> GradedMap<R> graded_from_json(const json& j, const Names& names) {
    GradedMap<R> f;
    f.shift = j.at("shift").get<int>();
    for (const auto& [key, m] : j.at("blocks").items()) {
        std::size_t used = 0;
        int deg = std::stoi(key, &used);
        if (used != key.size()) throw FormatError("bad degree key '" + key + "'");
        f.blocks[deg] = matrix_from_json<R>(m, names);
    }
    return f;
}

template <class R> json equivalence_to_json(const EquivCert<R>& c, const Names& names) {
    return {{"Y", complex_to_json(c.Y, names)},
            {"Yp", complex_to_json(c.Yp, names)},
            {"p", graded_to_json(c.p, names)},
            {"g", graded_to_json(c.g, names)},
            {"k", graded_to_json(c.k, names)}};
}

template <class R> EquivCert<R> equivalence_from_json(const json& j, const Names& names) {
    EquivCert<R> c;
    c.Y = complex_from_json<R>(j.at("Y"), names);
    c.Yp = complex_from_json<R>(j.at("Yp"), names);
    c.p = graded_from_json<R>(j.at("p"), names);
    c.g = graded_from_json<R>(j.at("g"), names);
    c.k = graded_from_json<R>(j.at("k"), names);
    return c;
}

/// Deterministic text form (sorted keys, fixed layout).
std::string dump(const json& j);

} // namespace hk::cert
