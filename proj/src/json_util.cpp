#include "json_util.hpp"

namespace ia::detail {

using nlohmann::json;

json matrix_to_json(const CMat& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

CMat matrix_from_json(const json& rows, Eigen::Index nrows, Eigen::Index ncols,
                      const std::string& key) {
    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != nrows)
        throw std::runtime_error("matrix \"" + key + "\" must have " + std::to_string(nrows) +
                                 " rows");
    CMat m(nrows, ncols);
    for (Eigen::Index r = 0; r < nrows; ++r) {
        const json& row = rows[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != ncols)
            throw std::runtime_error("matrix \"" + key + "\" row " + std::to_string(r) +
                                     " must have " + std::to_string(ncols) + " entries");
        for (Eigen::Index c = 0; c < ncols; ++c) {
            const json& e = row[static_cast<std::size_t>(c)];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                throw std::runtime_error("matrix \"" + key +
                                         "\" entries must be [re, im] pairs");
            m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
        }
    }
    if (!m.allFinite())
        throw std::runtime_error("matrix \"" + key + "\" has non-finite entries");
    return m;
}

} // namespace ia::detail
