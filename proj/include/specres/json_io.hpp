#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "specres/resolution.hpp"
#include "specres/similarity.hpp"

namespace specres {

using Json = nlohmann::ordered_json;

// 17 significant digits: exact round trip for doubles.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline Json matrix_to_json(const ComplexMatrix& m) {
    Json data = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            data.push_back({m(i, j).real(), m(i, j).imag()});
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline ComplexMatrix matrix_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
        throw ParseError("matrix json: expected {rows, cols, data}");
    Eigen::Index rows = j.at("rows").get<Eigen::Index>();
    Eigen::Index cols = j.at("cols").get<Eigen::Index>();
    const Json& data = j.at("data");
    if (rows < 0 || cols < 0 ||
        static_cast<Eigen::Index>(data.size()) != rows * cols)
        throw ParseError("matrix json: data length does not match rows*cols");
    ComplexMatrix m(rows, cols);
    Eigen::Index idx = 0;
    for (const auto& entry : data) {
        if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
            !entry[1].is_number())
            throw ParseError("matrix json: entries must be [re, im]");
        double re = entry[0].get<double>();
        double im = entry[1].get<double>();
        if (!std::isfinite(re) || !std::isfinite(im))
            throw ParseError("matrix json: non-finite entry");
        m(idx / cols, idx % cols) = Complex(re, im);
        ++idx;
    }
    return m;
}

inline Json resolution_to_json(const StepResolution& x) {
    Json incs = Json::array();
    for (const auto& d : x.increments) incs.push_back(matrix_to_json(d));
    return Json{{"dim", x.dim}, {"jumps", x.jumps}, {"increments", std::move(incs)}};
}

// Loader re-validates the axioms unless force is set (counterexample
// studies load knowingly-broken families that way).
inline StepResolution resolution_from_json(const Json& j, bool force = false,
                                           double tol_factor = 1.0) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("jumps") ||
        !j.contains("increments"))
        throw ParseError("resolution json: expected {dim, jumps, increments}");
    Eigen::Index dim = j.at("dim").get<Eigen::Index>();
    std::vector<double> jumps = j.at("jumps").get<std::vector<double>>();
    for (double l : jumps)
        if (!std::isfinite(l)) throw ParseError("resolution json: non-finite jump");
    std::vector<ComplexMatrix> incs;
    for (const auto& mj : j.at("increments")) incs.push_back(matrix_from_json(mj));
    StepResolution x = make_step_resolution(dim, std::move(jumps), std::move(incs));
    if (!force) {
        double g = gamma(x);
        AxiomReport rep = check_axioms(x, tol_scale(1e-10, g * g));
        if (!rep.all_hold())
            throw BadSpectralFamily(
                "resolution json: axiom check failed (use force to load anyway)");
    }
    return x;
}

inline Json generalized_to_json(const GeneralizedStepResolution& gf) {
    Json incs = Json::array();
    for (const auto& d : gf.increments) incs.push_back(matrix_to_json(d));
    return Json{{"dim", gf.dim},
                {"jumps", gf.jumps},
                {"increments", std::move(incs)},
                {"monotone", gf.monotone_flag}};
}

inline GeneralizedStepResolution generalized_from_json(const Json& j) {
    GeneralizedStepResolution gf;
    gf.dim = j.at("dim").get<Eigen::Index>();
    gf.jumps = j.at("jumps").get<std::vector<double>>();
    for (const auto& mj : j.at("increments"))
        gf.increments.push_back(matrix_from_json(mj));
    gf.monotone_flag = true;
    for (const auto& d : gf.increments) {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(
            ComplexMatrix(0.5 * (d + ComplexMatrix(d.adjoint()))),
            Eigen::EigenvaluesOnly);
        if (es.eigenvalues()(0) < -tol_scale(1e-10, op_norm(d)))
            gf.monotone_flag = false;
    }
    return gf;
}

inline Json similarity_model_to_json(const SimilarityModel& m) {
    Json es = Json::array();
    for (const auto& e : m.E_increments) es.push_back(matrix_to_json(e));
    return Json{{"T", matrix_to_json(m.T)},
                {"G", matrix_to_json(m.G)},
                {"jumps", m.jumps},
                {"E_increments", std::move(es)}};
}

inline Json spectrum_to_json(const std::vector<Complex>& spec) {
    Json arr = Json::array();
    for (const auto& z : spec) arr.push_back({z.real(), z.imag()});
    return arr;
}

inline Json triple_summary_to_json(const TripleSummary& s) {
    return Json{{"dist_B_TX", s.dist_B_TX},
                {"dist_B_SX", s.dist_B_SX},
                {"dist_TX_SX", s.dist_TX_SX},
                {"comm_B_TX", s.comm_B_TX},
                {"comm_B_SX", s.comm_B_SX},
                {"spec_B", spectrum_to_json(s.spec_B)},
                {"spec_TX", spectrum_to_json(s.spec_TX)},
                {"spec_SX", spectrum_to_json(s.spec_SX)},
                {"gamma", s.gamma},
                {"kappa", s.kappa}};
}

inline Json axiom_report_to_json(const AxiomReport& rep) {
    Json entries = Json::array();
    for (const auto& e : rep.entries) {
        Json je{{"axiom_id", e.axiom_id},
                {"holds", e.holds},
                {"max_residual", e.max_residual}};
        if (e.witness_pair)
            je["witness"] = {e.witness_pair->first, e.witness_pair->second};
        else
            je["witness"] = nullptr;
        entries.push_back(std::move(je));
    }
    return Json{{"gamma", rep.gamma}, {"entries", std::move(entries)}};
}

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("json parse error in ") + path + ": " + e.what());
    }
}

inline void save_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write file: " + path);
    out << j.dump(2) << '\n';
}

} // namespace specres
