#pragma once

#include <string>

#include <json.hpp>

#include "cvqss/certification.hpp"
#include "cvqss/gaussian.hpp"

namespace cvqss {

// States serialize as {n_modes, mean: [...], cov: [[...]]} with row-major
// cov; reading re-validates symmetry and physicality through the ctor.
nlohmann::json state_to_json(const GaussianState& state);
GaussianState state_from_json(const nlohmann::json& j);

// Matrices are nested row-major arrays, the same layout as a state's cov.
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const cert::CertificationReport& report);

// Claims: {"players": P, "claims": {"<mask>": 0|1|2, ...}} covering every
// nonempty subset mask.
cert::AccessStructure access_structure_from_json(const nlohmann::json& j);
nlohmann::json access_structure_to_json(const cert::AccessStructure& s);

} // namespace cvqss
