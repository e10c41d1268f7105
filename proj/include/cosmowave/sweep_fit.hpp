#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cosmowave/kato_ode.hpp"
#include "cosmowave/wave_sim.hpp"

namespace cosmowave {

enum class SweepSource { ode, pde };
const char* sweep_source_label(SweepSource s);

struct SweepRecord {
    double epsilon = 0.0;
    std::optional<double> lifespan;
    SweepSource source = SweepSource::ode;
    std::string config_digest;
    std::string failure;  // reason when lifespan is absent
};

struct OdeSweepConfig {
    double mu = 0.0;
    double p = 2.0;
    CoefficientDescriptor K;
    double f0 = 1.0;  // data shape: F(t0) = eps*f0, F'(t0) = eps*f1
    double f1 = 1.0;
    double t0 = 1.0;
    double threshold = 1e10;
    double horizon = 1e7;
    OdeTolerances tol;
};

struct PdeSweepConfig {
    ModelParams base;  // epsilon is overridden per record
    RadialGrid grid;
    double threshold = 1e6;
    double horizon = 1e4;
    SimOptions options;
};

using SweepConfig = std::variant<OdeSweepConfig, PdeSweepConfig>;

// One record per epsilon, in input order regardless of execution order.
// Individual run failures are recorded in the record; configuration errors
// throw before any run starts. max_threads = 0 picks min(hardware, COSMOWAVE_THREADS).
std::vector<SweepRecord> sweep(const SweepConfig& config, std::span<const double> eps_list,
                               int max_threads = 0);

enum class FitTransform { loglog, log_corrected };
const char* fit_transform_label(FitTransform t);

struct FitOptions {
    double slope_tolerance = 0.10;
    double r2_floor = 0.98;
    bool trim_smallest = false;  // drop the smallest-epsilon finite record
};

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double theory_slope = 0.0;
    double relative_deviation = 0.0;
    bool pass = false;
    FitTransform transform = FitTransform::loglog;
    int points_used = 0;
    std::vector<double> excluded_epsilons;  // log_corrected: records with T <= e
};

// Ordinary least squares of ln T against ln eps; theory slope -(p-1)/2.
FitResult fit_powerlaw(std::span<const SweepRecord> records, double p, const FitOptions& = {});

// Least squares of ln(T^2 (ln T)^(-n(p-1))) against ln eps; theory slope
// -(p-1). Records with T <= e are excluded (the transform needs ln T > 1).
FitResult fit_log_corrected(std::span<const SweepRecord> records, int n, double p,
                            const FitOptions& = {});

}  // namespace cosmowave
