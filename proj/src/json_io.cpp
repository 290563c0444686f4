#include "cvqss/json_io.hpp"

#include <stdexcept>

namespace cvqss {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty())
        throw std::invalid_argument("matrix_from_json: expected nested arrays");
    const auto rows = j.size();
    const auto cols = j.at(0).size();
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (j.at(i).size() != cols)
            throw std::invalid_argument("matrix_from_json: ragged rows");
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
                j.at(i).at(c).get<double>();
    }
    return m;
}

json state_to_json(const GaussianState& state) {
    json j;
    j["n_modes"] = state.n_modes();
    j["mean"] = json::array();
    for (Eigen::Index i = 0; i < state.mean().size(); ++i)
        j["mean"].push_back(state.mean()[i]);
    j["cov"] = matrix_to_json(state.cov());
    return j;
}

GaussianState state_from_json(const json& j) {
    const int n = j.at("n_modes").get<int>();
    const auto& jm = j.at("mean");
    Vector mean(jm.size());
    for (std::size_t i = 0; i < jm.size(); ++i)
        mean[static_cast<Eigen::Index>(i)] = jm.at(i).get<double>();
    return GaussianState(n, std::move(mean), matrix_from_json(j.at("cov")));
}

json report_to_json(const cert::CertificationReport& report) {
    json j;
    j["verdict"] = report.verdict;
    j["copies_used"] = report.copies_used;
    j["subsets"] = json::array();
    for (const auto& rec : report.subsets) {
        json r;
        r["mask"] = rec.mask;
        r["est_qmi"] = rec.est_qmi;
        r["eps_qmi"] = rec.eps_qmi;
        r["classification"] = rec.classification;
        r["claimed"] = rec.claimed;
        r["matched"] = rec.matched;
        r["floored"] = rec.floored;
        if (rec.estimate_failed) r["estimate_failed"] = true;
        j["subsets"].push_back(std::move(r));
    }
    return j;
}

cert::AccessStructure access_structure_from_json(const json& j) {
    const int players = j.at("players").get<int>();
    if (players < 1 || players > 20)
        throw std::invalid_argument("access structure: bad player count");
    const unsigned count = (1u << players) - 1u;
    std::vector<int> classes(count, -1);
    for (const auto& [key, value] : j.at("claims").items()) {
        const unsigned long mask = std::stoul(key);
        if (mask < 1 || mask > count)
            throw std::invalid_argument("access structure: mask out of range");
        classes[mask - 1] = value.get<int>();
    }
    for (unsigned i = 0; i < count; ++i)
        if (classes[i] < 0)
            throw std::invalid_argument(
                "access structure: missing claim for subset " +
                std::to_string(i + 1));
    return cert::AccessStructure(players, std::move(classes));
}

json access_structure_to_json(const cert::AccessStructure& s) {
    json claims = json::object();
    for (unsigned mask = 1; mask <= s.subset_count(); ++mask)
        claims[std::to_string(mask)] = s.claimed(mask);
    return json{{"players", s.players()}, {"claims", claims}};
}

} // namespace cvqss
