#pragma once

#include <string>

#include <json.hpp>

#include "teq/channel.hpp"

namespace teq::cli {

/// {"n": 2, "kraus": [ [[ [re, im], ...], ...], ... ]}: operators, then rows, then entries.
KrausChannel kraus_from_json(const nlohmann::json& doc, double tol = kDefaultTol);
KrausChannel read_kraus_file(const std::string& path, double tol = kDefaultTol);
nlohmann::json kraus_to_json(const KrausChannel& c);

}  // namespace teq::cli
