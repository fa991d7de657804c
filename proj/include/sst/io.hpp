#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sst/design.hpp"
#include "sst/montecarlo.hpp"
#include "sst/risk.hpp"

namespace sst {

/// Raised for unreadable or malformed input files.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double value);

std::vector<double> read_vector_csv(const std::filesystem::path& path);
void write_vector_csv(const std::filesystem::path& path, const std::vector<double>& values);

/// Row-major n x n, comma separated, no header. Gram property is validated.
OrthogonalDesign read_design_csv(const std::filesystem::path& path);
void write_design_csv(const std::filesystem::path& path, const OrthogonalDesign& design);

nlohmann::json to_json(const ExperimentConfig& config);
/// Starts from the named preset when "preset" is present, then applies every
/// other key. Throws InputError on type errors, std::invalid_argument on bad
/// values.
ExperimentConfig config_from_json(const nlohmann::json& doc);
ExperimentConfig read_config(const std::filesystem::path& path);

nlohmann::json to_json(const SureReport& report);
nlohmann::json to_json(const McSummary& summary);

/// Columns: lambda, method, risk_mean, risk_sd, sure_mean, dof1_mean,
/// dof2_mean, ht_d1_theory, ht_d2_theory. One row per (lambda, method).
std::string sweep_csv(const McSummary& summary);
/// Columns: method, risk_mean, risk_sd, khat_mean, khat_sd, serr_mean, serr_sd.
std::string selection_csv(const McSummary& summary);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace sst
