#pragma once

#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include "json.hpp"

#include "cosmowave/exponents.hpp"
#include "cosmowave/kato_ode.hpp"
#include "cosmowave/sweep_fit.hpp"
#include "cosmowave/wave_sim.hpp"

namespace cosmowave {

inline constexpr const char* kSchemaTag = "cosmowave/v1";

// Shortest round-trip decimal rendering, locale-independent.
std::string format_double(double x);

// 64-bit FNV-1a, hex-encoded; used as the reproducibility digest of configs.
std::string fnv1a_hex(std::string_view data);

// Throws std::invalid_argument naming any key not in the allowed list.
void validate_keys(const nlohmann::json& obj, std::initializer_list<const char*> allowed,
                   const char* context);
// Requires obj["schema"] == "cosmowave/v1".
void require_schema(const nlohmann::json& obj);

nlohmann::json to_json(const ModelParams& m);
ModelParams model_params_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RadialGrid& g);
RadialGrid radial_grid_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CoefficientDescriptor& k);
CoefficientDescriptor coefficient_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SimOptions& o);  // plain fields only
void sim_options_from_json(const nlohmann::json& j, SimOptions& o);

nlohmann::json to_json(const OdeSweepConfig& c);
OdeSweepConfig ode_sweep_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PdeSweepConfig& c);
PdeSweepConfig pde_sweep_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SweepConfig& c);
std::string sweep_config_digest(const SweepConfig& c);

nlohmann::json to_json(const FitResult& f);

nlohmann::json sim_summary_json(const SimResult& r);
nlohmann::json ode_summary_json(const OdeTrajectory& t);

// CSV emission with fixed headers, '.' decimal separator, LF line endings.
std::string sim_history_csv(const SimResult& r);                     // t,max_u,support_r,F,Fprime
std::string ode_trajectory_csv(const OdeTrajectory& t);              // t,F,Fprime
std::string sweep_records_csv(std::span<const SweepRecord> records); // epsilon,lifespan,source
std::vector<SweepRecord> sweep_records_from_csv(std::istream& in);

// Geometric epsilon grids: "2^-6..2^-16" (consecutive powers of two) or a
// comma-separated list of positive reals.
std::vector<double> parse_eps_grid(const std::string& spec);

}  // namespace cosmowave
