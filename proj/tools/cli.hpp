#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace teq::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kSuccess = 0, kVerificationFailure = 1, kInputError = 2 };

enum class OutputFormat { Text, Json, Csv };

/// Scalar leaves of a record keyed by dotted path; array elements are indexed as key[i].
std::vector<std::pair<std::string, nlohmann::ordered_json>> flatten(const nlohmann::ordered_json& record);

void emit(const nlohmann::ordered_json& record, OutputFormat format, std::ostream& out);

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace teq::cli
