#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "impob/criteria.hpp"
#include "impob/descriptor.hpp"
#include "impob/errors.hpp"
#include "impob/matrix.hpp"
#include "impob/polynomial.hpp"
#include "impob/rational.hpp"

namespace impob {

using json = nlohmann::json;

// Entries are written as strings, "p" or "p/q". On input, JSON integers are
// accepted as a shorthand; floats are refused unless approx is set, in which
// case the IEEE value is converted exactly (doubles are dyadic rationals).
inline Rational rational_from_json(const json& j, bool approx = false) {
    if (j.is_number_integer())
        return Rational(static_cast<long>(j.get<std::int64_t>()));
    if (j.is_string())
        return rational_from_string(j.get<std::string>());
    if (j.is_number_float()) {
        if (!approx)
            throw parse_error("float entry rejected (pass --approx-ingest to rationalize)");
        return Rational(j.get<double>());
    }
    throw parse_error("matrix entry must be an integer or a \"p/q\" string");
}

inline json rational_to_json(const Rational& q) {
    return to_string(q);
}

inline RationalMatrix matrix_from_json(const json& j, std::optional<std::size_t> cols_hint,
                                       bool approx = false) {
    if (!j.is_array())
        throw parse_error("matrix must be an array of rows");
    const std::size_t rows = j.size();
    std::size_t cols = cols_hint.value_or(0);
    if (rows > 0) {
        if (!j[0].is_array())
            throw parse_error("matrix rows must be arrays");
        cols = j[0].size();
        if (cols_hint && cols != *cols_hint)
            throw parse_error("matrix has unexpected column count");
    }
    RationalMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw parse_error("matrix rows must be arrays of equal length");
        for (std::size_t c = 0; c < cols; ++c)
            m(i, c) = rational_from_json(j[i][c], approx);
    }
    return m;
}

inline json matrix_to_json(const RationalMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j)
            row.push_back(rational_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline json vector_to_json(const RationalVector& v) {
    json out = json::array();
    for (const Rational& x : v)
        out.push_back(rational_to_json(x));
    return out;
}

inline RationalVector vector_from_json(const json& j) {
    if (!j.is_array())
        throw parse_error("vector must be an array");
    RationalVector v;
    v.reserve(j.size());
    for (const json& e : j)
        v.push_back(rational_from_json(e));
    return v;
}

inline json polynomial_to_json(const RationalPolynomial& p) {
    return vector_to_json(p.coeffs());
}

inline RationalPolynomial polynomial_from_json(const json& j) {
    return RationalPolynomial::from_coeffs(vector_from_json(j));
}

// On-disk system description: E, A square over n, C with n columns (possibly
// zero rows, written as []). Extra keys are ignored.
struct SystemFile {
    std::string name;
    RationalMatrix E;
    RationalMatrix A;
    RationalMatrix C;
};

inline SystemFile system_file_from_json(const json& j, bool approx = false) {
    if (!j.is_object())
        throw parse_error("system file must be a JSON object");
    for (const char* key : {"E", "A", "C"})
        if (!j.contains(key))
            throw parse_error(std::string("system file missing \"") + key + "\"");
    SystemFile f;
    if (j.contains("name")) {
        if (!j.at("name").is_string())
            throw parse_error("system name must be a string");
        f.name = j.at("name").get<std::string>();
    }
    f.E = matrix_from_json(j.at("E"), std::nullopt, approx);
    const std::size_t n = f.E.cols();
    f.A = matrix_from_json(j.at("A"), n, approx);
    f.C = matrix_from_json(j.at("C"), n, approx);
    return f;
}

inline json system_file_to_json(const SystemFile& f) {
    json j;
    if (!f.name.empty())
        j["name"] = f.name;
    j["E"] = matrix_to_json(f.E);
    j["A"] = matrix_to_json(f.A);
    j["C"] = matrix_to_json(f.C);
    return j;
}

inline json witness_to_json(const ImpulseWitness& w) {
    json j;
    j["order"] = w.order();
    j["v"] = vector_to_json(w.initial_state());
    json alt = json::array(), pw = json::array();
    for (std::size_t i = 0; i <= w.order(); ++i) {
        alt.push_back(vector_to_json(w.coeff(i)));
        pw.push_back(vector_to_json(w.power_coeff(i)));
    }
    j["coeffs_alternating"] = std::move(alt);
    j["coeffs_power"] = std::move(pw);
    return j;
}

// The alternating-convention coefficients are canonical; the power-basis
// block is redundant on disk and regenerated, not read.
inline ImpulseWitness witness_from_json(const json& j) {
    if (!j.is_object() || !j.contains("v") || !j.contains("coeffs_alternating"))
        throw parse_error("witness must carry \"v\" and \"coeffs_alternating\"");
    RationalVector v = vector_from_json(j["v"]);
    if (!j["coeffs_alternating"].is_array())
        throw parse_error("witness coefficients must be an array");
    std::vector<RationalVector> coeffs;
    for (const json& e : j["coeffs_alternating"])
        coeffs.push_back(vector_from_json(e));
    return ImpulseWitness(std::move(v), std::move(coeffs));
}

// Flat, serializable view of a verdict: everything cmd_check writes.
struct ReportDocument {
    bool verdict = true;
    std::string strategy;
    std::vector<OrderCheck> rank_table;
    std::size_t rank_E = 0;
    RationalPolynomial det_pencil;
    std::optional<ImpulseWitness> witness;

    friend bool operator==(const ReportDocument&, const ReportDocument&) = default;
};

inline ReportDocument make_report_document(const DescriptorSystem& sys,
                                           const ObservabilityReport& report) {
    return {report.verdict, strategy_to_string(report.strategy), report.rank_table,
            sys.rank_E(),   sys.det_pencil(),                    report.witness};
}

inline json report_document_to_json(const ReportDocument& doc) {
    json j;
    j["verdict"] = doc.verdict;
    j["strategy"] = doc.strategy;
    json table = json::array();
    for (const OrderCheck& row : doc.rank_table)
        table.push_back({{"r", row.r},
                         {"rank", row.rank_found},
                         {"required", row.rank_required},
                         {"holds", row.holds}});
    j["rank_table"] = std::move(table);
    j["rank_E"] = doc.rank_E;
    j["det_pencil"] = polynomial_to_json(doc.det_pencil);
    j["witness"] = doc.witness ? witness_to_json(*doc.witness) : json(nullptr);
    return j;
}

inline ReportDocument report_document_from_json(const json& j) {
    if (!j.is_object())
        throw parse_error("report must be a JSON object");
    ReportDocument doc;
    doc.verdict = j.at("verdict").get<bool>();
    doc.strategy = j.at("strategy").get<std::string>();
    for (const json& row : j.at("rank_table")) {
        OrderCheck check{row.at("r").get<std::size_t>(), row.at("rank").get<std::size_t>(),
                         row.at("required").get<std::size_t>(), row.at("holds").get<bool>()};
        doc.rank_table.push_back(check);
    }
    doc.rank_E = j.at("rank_E").get<std::size_t>();
    doc.det_pencil = polynomial_from_json(j.at("det_pencil"));
    if (!j.at("witness").is_null())
        doc.witness = witness_from_json(j.at("witness"));
    return doc;
}

inline json json_from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw error("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw parse_error(path.string() + ": " + e.what());
    }
}

// Write-then-rename so readers never observe a half-written file.
inline void atomic_write_text(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out)
            throw error("cannot write " + tmp.string());
        out << text;
        if (!out.flush())
            throw error("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw error("rename failed for " + path.string() + ": " + ec.message());
}

} // namespace impob
