#include "tabgen/kernel_backend.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tabgen/errors.hpp"
#include "tabgen/stats.hpp"

namespace tabgen {

KernelBackend KernelBackend::fit(const Inventory& train, KernelBackendOptions opts) {
    if (train.row_count() == 0) throw DataError("kernel backend: training table is empty");
    if (train.has_missing()) {
        throw DataError("kernel backend: training table has missing cells; impute first");
    }
    if (!(opts.lambda_cat > 0.0 && opts.lambda_cat <= 1.0)) {
        throw DataError("kernel backend: lambda_cat must be in (0, 1]");
    }

    KernelBackend model;
    model.schema_ = train.schema();
    model.n_ = train.row_count();
    model.lambda_cat_ = opts.lambda_cat;
    const std::size_t d = train.feature_count();
    model.numeric_.resize(d);
    model.codes_.resize(d);
    model.bandwidth_.assign(d, 0.0);

    for (std::size_t c = 0; c < d; ++c) {
        const FeatureSpec& spec = model.schema_.at(c);
        if (spec.is_numeric()) {
            auto values = train.numeric_column(c);
            model.bandwidth_[c] = stats::silverman_bandwidth(stats::sample_sd(values), model.n_);
            model.numeric_[c] = std::move(values);
        } else {
            auto& codes = model.codes_[c];
            codes.reserve(model.n_);
            for (const auto& row : train.rows()) {
                codes.push_back(spec.category_index(row[c].category_label()));
            }
        }
    }
    return model;
}

std::vector<double> KernelBackend::context_log_weights(const PartialRow& context) const {
    std::vector<double> logw(n_, 0.0);
    if (context.size() != schema_.size()) {
        throw DataError("kernel backend: context size does not match schema");
    }
    const double log_lambda = std::log(lambda_cat_);
    for (std::size_t c = 0; c < context.size(); ++c) {
        if (!context[c]) continue;
        const Cell& cell = *context[c];
        if (cell.is_missing()) {
            throw DataError("kernel backend: context contains a missing cell");
        }
        const FeatureSpec& spec = schema_.at(c);
        if (spec.is_numeric()) {
            const double x = cell.number_value();
            const double h = bandwidth_[c];
            for (std::size_t j = 0; j < n_; ++j) {
                const double z = (x - numeric_[c][j]) / h;
                logw[j] += -0.5 * z * z;
            }
        } else {
            const int code = spec.category_index(cell.category_label());
            if (code < 0) {
                throw DataError("kernel backend: unknown category '" + cell.category_label() +
                                "' in context column '" + spec.name + "'");
            }
            for (std::size_t j = 0; j < n_; ++j) {
                if (codes_[c][j] != code) logw[j] += log_lambda;
            }
        }
    }
    const double norm = stats::logsumexp(logw);
    for (double& w : logw) w -= norm;
    return logw;
}

double KernelBackend::log_conditional(std::size_t feature, const Cell& value,
                                      const PartialRow& context) const {
    if (feature >= schema_.size()) throw DataError("kernel backend: feature index out of range");
    if (feature < context.size() && context[feature]) {
        throw DataError("kernel backend: context already covers feature '" +
                        schema_.at(feature).name + "'");
    }
    const FeatureSpec& spec = schema_.at(feature);
    const auto logw = context_log_weights(context);

    if (spec.is_numeric()) {
        if (!value.is_number()) {
            throw DataError("kernel backend: numeric value expected for '" + spec.name + "'");
        }
        const double x = value.number_value();
        const double h = bandwidth_[feature];
        std::vector<double> terms(n_);
        for (std::size_t j = 0; j < n_; ++j) {
            terms[j] = logw[j] + stats::log_norm_pdf(x, numeric_[feature][j], h);
        }
        return stats::logsumexp(terms);
    }

    if (!value.is_category()) {
        throw DataError("kernel backend: category value expected for '" + spec.name + "'");
    }
    const int code = spec.category_index(value.category_label());
    if (code < 0) {
        throw DataError("kernel backend: category '" + value.category_label() +
                        "' is outside the list of column '" + spec.name + "'");
    }
    std::vector<double> terms;
    terms.reserve(n_);
    for (std::size_t j = 0; j < n_; ++j) {
        if (codes_[feature][j] == code) terms.push_back(logw[j]);
    }
    if (terms.empty()) return -std::numeric_limits<double>::infinity();
    return stats::logsumexp(terms);
}

std::vector<double> KernelBackend::conditional_masses(std::size_t feature,
                                                      const PartialRow& context,
                                                      double temperature) const {
    const FeatureSpec& spec = schema_.at(feature);
    if (spec.is_numeric()) {
        throw DataError("conditional_masses: feature '" + spec.name + "' is numeric");
    }
    if (!(temperature > 0.0)) throw DataError("temperature must be positive");

    const auto logw = context_log_weights(context);
    std::vector<double> masses(spec.categories.size(), 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
        masses[static_cast<std::size_t>(codes_[feature][j])] += std::exp(logw[j]);
    }
    // Temper the masses as p^(1/T), then renormalize.
    double total = 0.0;
    for (double& m : masses) {
        m = m > 0.0 ? std::pow(m, 1.0 / temperature) : 0.0;
        total += m;
    }
    for (double& m : masses) m /= total;
    return masses;
}

Cell KernelBackend::sample_conditional(std::size_t feature, const PartialRow& context,
                                       double temperature, RngStream& rng) const {
    if (!(temperature > 0.0)) throw DataError("temperature must be positive");
    const FeatureSpec& spec = schema_.at(feature);

    if (spec.is_discrete()) {
        const auto masses = conditional_masses(feature, context, temperature);
        const double u = rng.uniform01();
        double acc = 0.0;
        std::size_t pick = masses.size() - 1;
        for (std::size_t c = 0; c < masses.size(); ++c) {
            acc += masses[c];
            if (u < acc) {
                pick = c;
                break;
            }
        }
        return Cell::category(spec.categories[pick]);
    }

    // Numeric: pick a mixture component with probability proportional to
    // w_j^(1/T), then add Gaussian kernel noise scaled by sqrt(T).
    auto logw = context_log_weights(context);
    for (double& w : logw) w /= temperature;
    const double norm = stats::logsumexp(logw);
    const double u = rng.uniform01();
    double acc = 0.0;
    std::size_t pick = n_ - 1;
    for (std::size_t j = 0; j < n_; ++j) {
        acc += std::exp(logw[j] - norm);
        if (u < acc) {
            pick = j;
            break;
        }
    }
    const double h = bandwidth_[feature];
    const double value = numeric_[feature][pick] + h * std::sqrt(temperature) * rng.normal();
    return Cell::number(value);
}

} // namespace tabgen
