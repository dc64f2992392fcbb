#include "kraus_io.hpp"

#include <fstream>
#include <stdexcept>

namespace teq::cli {

namespace {

Complex entry(const nlohmann::json& e) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw std::invalid_argument("kraus file: each entry must be a [re, im] pair of numbers");
    }
    return {e[0].get<double>(), e[1].get<double>()};
}

}  // namespace

KrausChannel kraus_from_json(const nlohmann::json& doc, double tol) {
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("kraus")) {
        throw std::invalid_argument("kraus file: expected an object with keys \"n\" and \"kraus\"");
    }
    if (!doc["n"].is_number_integer()) throw std::invalid_argument("kraus file: \"n\" must be an integer");
    const int n = doc["n"].get<int>();
    if (n < 2) throw std::invalid_argument("kraus file: \"n\" must be at least 2");
    const auto& list = doc["kraus"];
    if (!list.is_array() || list.empty()) throw std::invalid_argument("kraus file: \"kraus\" must be a non-empty list");

    std::vector<ComplexMatrix> ops;
    for (const auto& op : list) {
        if (!op.is_array() || static_cast<int>(op.size()) != n) {
            throw std::invalid_argument("kraus file: every operator must have n rows");
        }
        ComplexMatrix m(n, n);
        for (int i = 0; i < n; ++i) {
            const auto& row = op[static_cast<size_t>(i)];
            if (!row.is_array() || static_cast<int>(row.size()) != n) {
                throw std::invalid_argument("kraus file: every row must have n entries");
            }
            for (int j = 0; j < n; ++j) m(i, j) = entry(row[static_cast<size_t>(j)]);
        }
        ops.push_back(std::move(m));
    }
    return KrausChannel::validate(std::move(ops), tol);
}

KrausChannel read_kraus_file(const std::string& path, double tol) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("kraus file: cannot open " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("kraus file: malformed JSON: ") + e.what());
    }
    return kraus_from_json(doc, tol);
}

nlohmann::json kraus_to_json(const KrausChannel& c) {
    nlohmann::json ops = nlohmann::json::array();
    for (const auto& m : c.ops()) {
        nlohmann::json rows = nlohmann::json::array();
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
            rows.push_back(std::move(row));
        }
        ops.push_back(std::move(rows));
    }
    return {{"n", c.dim()}, {"kraus", std::move(ops)}};
}

}  // namespace teq::cli
