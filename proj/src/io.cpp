#include "opconvex/io.hpp"

#include <fstream>

namespace opconvex {

nlohmann::json matrix_to_json(const GeneralMatrix& m) {
    std::vector<std::vector<double>> re(m.rows(), std::vector<double>(m.cols()));
    std::vector<std::vector<double>> im(m.rows(), std::vector<double>(m.cols()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            re[i][j] = m(i, j).real();
            im[i][j] = m(i, j).imag();
        }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

nlohmann::json matrix_to_json(const HermitianMatrix& m) { return matrix_to_json(m.matrix()); }

GeneralMatrix matrix_from_json(const nlohmann::json& j) {
    try {
        const int rows = j.at("rows").get<int>();
        const int cols = j.at("cols").get<int>();
        if (rows < 1 || cols < 1) throw ConfigError("matrix shape must be positive");
        const auto re = j.at("re").get<std::vector<std::vector<double>>>();
        // im is optional so hand-written real matrices stay terse.
        std::vector<std::vector<double>> im;
        if (j.contains("im")) im = j.at("im").get<std::vector<std::vector<double>>>();

        GeneralMatrix m(rows, cols);
        if (static_cast<int>(re.size()) != rows) throw ConfigError("re has wrong row count");
        for (int i = 0; i < rows; ++i) {
            if (static_cast<int>(re[i].size()) != cols)
                throw ConfigError("re has wrong column count");
            for (int jj = 0; jj < cols; ++jj) {
                double imag = 0.0;
                if (!im.empty()) {
                    if (static_cast<int>(im.size()) != rows ||
                        static_cast<int>(im[i].size()) != cols)
                        throw ConfigError("im shape does not match re");
                    imag = im[i][jj];
                }
                m(i, jj) = Complex(re[i][jj], imag);
            }
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed matrix json: ") + e.what());
    }
}

nlohmann::json grid_nodes_to_json(const std::vector<std::vector<double>>& nodes) {
    return {{"nodes", nodes}};
}

std::vector<std::vector<double>> grid_nodes_from_json(const nlohmann::json& j) {
    try {
        return j.at("nodes").get<std::vector<std::vector<double>>>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed grid json: ") + e.what());
    }
}

nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "' for reading");
    try {
        nlohmann::json j;
        in >> j;
        return j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("cannot parse '" + path + "': " + e.what());
    }
}

void save_json_file(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    out << j.dump(2) << "\n";
    if (!out) throw ConfigError("failed writing '" + path + "'");
}

} // namespace opconvex
