#pragma once

// File formats.  JSON via nlohmann/json, CSV hand-formatted with "%.17g"
// doubles so that identical inputs produce byte-identical files.
//
//   constellation JSON : {"doubled_spin": D, "label": str, "vectors": [[x,y,z], ...]}
//   constellation CSV  : header "x,y,z", one row per vector
//   diagnostics JSON   : {"det", "log_abs_det", "eigenvalues", "condition_number",
//                         "is_basis", "tau"}; infinities are serialized as null
//   Q-sample CSV       : header "n,x,y,z,p_n", one row per direction
//   operator JSON      : {"doubled_spin": D, "matrix": [[[re, im], ...], ...]} row-major
//   trajectory CSV     : header "t,x,y,z,H", one row per sample
//   repair-report JSON : {"moved_indices", "total_displacement",
//                         "final_log_abs_det", "attempts"}
//
// Loaders validate: well-formed syntax, matching counts (N_s = (2s+1)^2),
// unit vectors within 1e-9.  All failures throw IoError.

#include "constellation.hpp"
#include "flow.hpp"
#include "gram.hpp"
#include "repair.hpp"
#include "tomography.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spinframe {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

/// Shortest-faithful double formatting for CSV ("%.17g" round-trips exactly).
inline std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
}

inline std::string read_text_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot open file for reading: " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot open file for writing: " + p.string());
    out << text;
    if (!out) throw IoError("write failed: " + p.string());
}

inline nlohmann::json parse_json(const std::string& text, const std::string& what) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw IoError("malformed JSON in " + what);
    return j;
}

/// A JSON [x, y, z] triple checked to be a unit vector within 1e-9.
inline UnitVector vector_from_json(const nlohmann::json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() ||
        !j[2].is_number())
        throw IoError(what + ": each vector must be a numeric [x, y, z] triple");
    const double x = j[0].get<double>(), y = j[1].get<double>(), z = j[2].get<double>();
    const double norm = std::sqrt(x * x + y * y + z * z);
    if (std::abs(norm - 1.0) > 1e-9)
        throw IoError(what + ": vector is not unit length (|norm - 1| > 1e-9)");
    return UnitVector(x, y, z);
}

/// Split one CSV line on commas (fields here never contain commas or quotes).
inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline double parse_double(const std::string& field, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(field, &pos);
        if (pos != field.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw IoError(what + ": cannot parse number '" + field + "'");
    }
}

}  // namespace detail

// ---------------------------------------------------------------- constellation

inline nlohmann::json constellation_to_json(const Constellation& M) {
    nlohmann::json vecs = nlohmann::json::array();
    for (const UnitVector& v : M.vectors()) vecs.push_back({v.x(), v.y(), v.z()});
    return nlohmann::json{{"doubled_spin", M.spin().doubled()},
                          {"label", M.label()},
                          {"vectors", std::move(vecs)}};
}

inline Constellation constellation_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("doubled_spin") || !j.contains("vectors"))
        throw IoError("constellation: need object with 'doubled_spin' and 'vectors'");
    if (!j["doubled_spin"].is_number_integer() || j["doubled_spin"].get<int>() < 0)
        throw IoError("constellation: 'doubled_spin' must be a non-negative integer");
    const SpinLabel s(j["doubled_spin"].get<int>());
    if (!j["vectors"].is_array())
        throw IoError("constellation: 'vectors' must be an array");
    if (static_cast<int>(j["vectors"].size()) != s.n_points())
        throw IoError("constellation: expected " + std::to_string(s.n_points()) +
                      " vectors for doubled spin " + std::to_string(s.doubled()) + ", got " +
                      std::to_string(j["vectors"].size()));
    std::vector<UnitVector> vecs;
    vecs.reserve(j["vectors"].size());
    for (const auto& jv : j["vectors"]) vecs.push_back(detail::vector_from_json(jv, "constellation"));
    std::string label;
    if (j.contains("label")) {
        if (!j["label"].is_string()) throw IoError("constellation: 'label' must be a string");
        label = j["label"].get<std::string>();
    }
    return Constellation(s, std::move(vecs), std::move(label));
}

inline void save_constellation(const Constellation& M, const std::filesystem::path& p) {
    detail::write_text_file(p, constellation_to_json(M).dump(2) + "\n");
}

inline Constellation load_constellation(const std::filesystem::path& p) {
    return constellation_from_json(detail::parse_json(detail::read_text_file(p), p.string()));
}

/// Plain-coordinates export for plotting tools.
inline void save_constellation_csv(const Constellation& M, const std::filesystem::path& p) {
    std::string text = "x,y,z\n";
    for (const UnitVector& v : M.vectors())
        text += detail::fmt_double(v.x()) + "," + detail::fmt_double(v.y()) + "," +
                detail::fmt_double(v.z()) + "\n";
    detail::write_text_file(p, text);
}

// ---------------------------------------------------------------- diagnostics

inline nlohmann::json diagnostics_to_json(const FrameDiagnostics& d) {
    nlohmann::json ev = nlohmann::json::array();
    for (Eigen::Index i = 0; i < d.eigenvalues.size(); ++i) ev.push_back(d.eigenvalues(i));
    nlohmann::json j{{"det", d.det},
                     {"eigenvalues", std::move(ev)},
                     {"is_basis", d.is_basis},
                     {"tau", d.tau}};
    // nlohmann serializes non-finite doubles as null; make that explicit so
    // the schema reads as "number or null".
    j["log_abs_det"] = d.log_abs_det_finite ? nlohmann::json(d.log_abs_det) : nlohmann::json();
    j["condition_number"] =
        d.condition_number_finite ? nlohmann::json(d.condition_number) : nlohmann::json();
    return j;
}

inline void save_diagnostics(const FrameDiagnostics& d, const std::filesystem::path& p) {
    detail::write_text_file(p, diagnostics_to_json(d).dump(2) + "\n");
}

// ------------------------------------------------------------------- Q-sample

inline void save_qsample_csv(const QSample& q, const std::filesystem::path& p) {
    std::string text = "n,x,y,z,p_n\n";
    for (std::size_t i = 0; i < q.constellation.size(); ++i) {
        const UnitVector& v = q.constellation[i];
        text += std::to_string(i) + "," + detail::fmt_double(v.x()) + "," +
                detail::fmt_double(v.y()) + "," + detail::fmt_double(v.z()) + "," +
                detail::fmt_double(q.values(static_cast<Eigen::Index>(i))) + "\n";
    }
    detail::write_text_file(p, text);
}

/// Load a Q-sample; the spin is inferred from the row count (must be a
/// perfect square (2s+1)^2) and the directions must be unit vectors.
inline QSample load_qsample_csv(const std::filesystem::path& p) {
    const std::string text = detail::read_text_file(p);
    std::istringstream in(text);
    std::string line;
    std::vector<UnitVector> dirs;
    std::vector<double> vals;
    bool first = true;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> f = detail::split_csv_line(line);
        if (first && !f.empty() && f[0] == "n") {
            first = false;
            continue;  // header
        }
        first = false;
        if (f.size() != 5) throw IoError(p.string() + ": expected 5 columns n,x,y,z,p_n");
        const double n_field = detail::parse_double(f[0], p.string());
        if (n_field != static_cast<double>(row))
            throw IoError(p.string() + ": row indices must run 0,1,2,...");
        const double x = detail::parse_double(f[1], p.string());
        const double y = detail::parse_double(f[2], p.string());
        const double z = detail::parse_double(f[3], p.string());
        const double norm = std::sqrt(x * x + y * y + z * z);
        if (std::abs(norm - 1.0) > 1e-9)
            throw IoError(p.string() + ": direction in row " + std::to_string(row) +
                          " is not unit length");
        dirs.push_back(UnitVector(x, y, z));
        vals.push_back(detail::parse_double(f[4], p.string()));
        ++row;
    }
    const int n = static_cast<int>(dirs.size());
    const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    if (n == 0 || d * d != n)
        throw IoError(p.string() + ": row count " + std::to_string(n) +
                      " is not a perfect square (2s+1)^2");
    Eigen::VectorXd values(n);
    for (int i = 0; i < n; ++i) values(i) = vals[static_cast<std::size_t>(i)];
    return QSample{Constellation(SpinLabel(d - 1), std::move(dirs)), std::move(values)};
}

// ------------------------------------------------------------------- operator

inline nlohmann::json operator_to_json(const HermitianOperator& A, SpinLabel s) {
    if (A.rows() != s.dimension() || A.cols() != s.dimension())
        throw std::invalid_argument("operator_to_json: dimension does not match spin");
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            row.push_back({A(i, j).real(), A(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return nlohmann::json{{"doubled_spin", s.doubled()}, {"matrix", std::move(rows)}};
}

inline std::pair<HermitianOperator, SpinLabel> operator_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("doubled_spin") || !j.contains("matrix"))
        throw IoError("operator: need object with 'doubled_spin' and 'matrix'");
    if (!j["doubled_spin"].is_number_integer() || j["doubled_spin"].get<int>() < 0)
        throw IoError("operator: 'doubled_spin' must be a non-negative integer");
    const SpinLabel s(j["doubled_spin"].get<int>());
    const int d = s.dimension();
    const auto& m = j["matrix"];
    if (!m.is_array() || static_cast<int>(m.size()) != d)
        throw IoError("operator: 'matrix' must have " + std::to_string(d) + " rows");
    HermitianOperator A(d, d);
    for (int i = 0; i < d; ++i) {
        if (!m[i].is_array() || static_cast<int>(m[i].size()) != d)
            throw IoError("operator: each matrix row must have " + std::to_string(d) + " entries");
        for (int jj = 0; jj < d; ++jj) {
            const auto& e = m[i][jj];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                throw IoError("operator: each entry must be a numeric [re, im] pair");
            A(i, jj) = Complex(e[0].get<double>(), e[1].get<double>());
        }
    }
    return {std::move(A), s};
}

inline void save_operator(const HermitianOperator& A, SpinLabel s,
                          const std::filesystem::path& p) {
    detail::write_text_file(p, operator_to_json(A, s).dump(2) + "\n");
}

inline std::pair<HermitianOperator, SpinLabel> load_operator(const std::filesystem::path& p) {
    return operator_from_json(detail::parse_json(detail::read_text_file(p), p.string()));
}

// ----------------------------------------------------------------- trajectory

inline void save_trajectory_csv(const FlowTrajectory& T, const std::filesystem::path& p) {
    std::string text = "t,x,y,z,H\n";
    for (const FlowSample& smp : T.samples)
        text += detail::fmt_double(smp.t) + "," + detail::fmt_double(smp.v.x()) + "," +
                detail::fmt_double(smp.v.y()) + "," + detail::fmt_double(smp.v.z()) + "," +
                detail::fmt_double(smp.energy) + "\n";
    detail::write_text_file(p, text);
}

// -------------------------------------------------------------- repair report

inline nlohmann::json repair_report_to_json(const RepairReport& r) {
    return nlohmann::json{{"moved_indices", r.moved_indices},
                          {"total_displacement", r.total_displacement},
                          {"final_log_abs_det", r.final_log_abs_det},
                          {"attempts", r.attempts}};
}

}  // namespace spinframe
