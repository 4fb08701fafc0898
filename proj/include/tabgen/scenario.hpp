#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tabgen/inventory.hpp"

namespace tabgen {

// Marginal shape of one scenario feature, applied to the Gaussian copula
// coordinate through its quantile map.
enum class MarginalKind {
    Identity,  // standard normal
    Lognormal, // exp of the normal coordinate
    HeavyTail, // Student t with 4 degrees of freedom
    Mixture3,  // three-component Gaussian mixture (multimodal)
};

struct ScenarioNumeric {
    std::string name;
    MarginalKind marginal = MarginalKind::Identity;
    // Mixture3 parameters (ignored for other marginals).
    std::array<double, 3> mix_means{-2.0, 0.5, 2.5};
    std::array<double, 3> mix_sds{0.5, 0.45, 0.6};
    std::array<double, 3> mix_weights{0.35, 0.4, 0.25};
};

// Categorical feature derived by thresholding its own latent coordinate;
// labels.size() == thresholds.size() + 1.
struct ScenarioCategorical {
    std::string name;
    std::vector<double> thresholds; // ascending, in latent z units
    std::vector<std::string> labels;
};

// Ground-truth benchmark scenario: numeric features share a Gaussian copula
// with correlation matrix `correlation` over all latent coordinates (numeric
// first, then one per categorical feature).
struct Scenario {
    std::string name;
    std::vector<ScenarioNumeric> numeric;
    std::vector<ScenarioCategorical> categorical;
    std::vector<std::vector<double>> correlation;
    std::uint64_t truth_seed = 0;
    std::size_t n_train = 10;
    std::size_t n_truth = 100;

    std::size_t latent_dim() const { return numeric.size() + categorical.size(); }
    void validate() const;
};

// Built-in presets: zero_peak, heavy_tail, irregular, coupled_met.
Scenario scenario_preset(const std::string& name);
std::vector<std::string> scenario_preset_names();

Scenario scenario_from_json(const nlohmann::json& j);

// Draws (train, truth) with disjoint rng streams derived from truth_seed.
// Each row: z ~ N(0, R) via Cholesky, numeric x_j = Q_j(Phi(z_j)),
// categorical labels by thresholding the latent coordinate.
std::pair<Inventory, Inventory> make_scenario(const Scenario& scenario);

// Quantile map of one numeric marginal (exposed for tests).
double marginal_quantile(const ScenarioNumeric& feature, double u);

} // namespace tabgen
