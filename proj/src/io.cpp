#include "beamlab/io.hpp"

#include <cstdio>

namespace beamlab {

std::string format_scientific(double x) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.16e", x);
    return buffer;
}

std::string csv_table(const std::vector<std::pair<std::string, std::string>>& metadata,
                      const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
    std::string out;
    for (const auto& [key, value] : metadata) {
        out += "# " + key + "=" + value + "\n";
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i > 0) out += ',';
        out += header[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out += ',';
            out += row[i];
        }
        out += '\n';
    }
    return out;
}

std::string ucurve_csv(const UCurve& curve,
                       const std::vector<std::pair<std::string, std::string>>& metadata) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(curve.times.size());
    for (std::size_t j = 0; j < curve.times.size(); ++j) {
        rows.push_back({format_scientific(curve.times[j]), format_scientific(curve.u_mean[j]),
                        format_scientific(curve.u_stderr[j])});
    }
    return csv_table(metadata, {"t_reduced", "u_mean", "u_stderr"}, rows);
}

nlohmann::ordered_json fk_estimate_json(const FKEstimate& estimate) {
    return nlohmann::ordered_json{
        {"lambda_hat", estimate.lambda_hat},
        {"lambda_std_error", estimate.std_error},
        {"fit_window", {estimate.fit_window.first, estimate.fit_window.second}},
        {"r_squared", estimate.r_squared},
    };
}

nlohmann::ordered_json density_matrix_json(const DensityMatrix& rho) {
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    const auto dim = static_cast<Eigen::Index>(rho.dim());
    for (Eigen::Index m = 0; m < dim; ++m) {
        for (Eigen::Index n = 0; n < dim; ++n) {
            entries.push_back({rho.entries()(m, n).real(), rho.entries()(m, n).imag()});
        }
    }
    return nlohmann::ordered_json{
        {"dim", rho.dim()},
        {"truncation_deficit", rho.truncation_deficit()},
        {"entries", std::move(entries)},
    };
}

}  // namespace beamlab
