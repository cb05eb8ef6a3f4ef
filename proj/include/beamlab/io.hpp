#ifndef BEAMLAB_IO_HPP
#define BEAMLAB_IO_HPP

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "beamlab/fock.hpp"
#include "beamlab/stochastic.hpp"

namespace beamlab {

// 17 significant digits, scientific, '.' decimal separator.
std::string format_scientific(double x);

// CSV with '#'-prefixed metadata lines, a header row, and one row per entry.
// All numeric cells go through format_scientific.
std::string csv_table(const std::vector<std::pair<std::string, std::string>>& metadata,
                      const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows);

// UCurve as CSV with columns t_reduced,u_mean,u_stderr.
std::string ucurve_csv(const UCurve& curve,
                       const std::vector<std::pair<std::string, std::string>>& metadata);

nlohmann::ordered_json fk_estimate_json(const FKEstimate& estimate);

// Density matrix as {dim, truncation_deficit, entries: [[re, im], ...]}
// in row-major order.
nlohmann::ordered_json density_matrix_json(const DensityMatrix& rho);

}  // namespace beamlab

#endif  // BEAMLAB_IO_HPP
