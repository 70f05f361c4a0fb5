#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bridgerank/dataset.hpp"

namespace bridgerank {

// Everything the factorization learns.
//
//   eta_hat(r, n) = beta0 + beta_n[n] + beta_r[r] + theta_n[n] * theta_r[r]
struct ModelParams {
    double beta0 = 0.0;
    std::vector<double> beta_r;   // rater leniency
    std::vector<double> beta_n;   // note helpfulness beyond ideology
    std::vector<double> theta_r;  // rater latent ideology
    std::vector<double> theta_n;  // note latent ideology

    static ModelParams zeros(std::size_t raters, std::size_t notes);

    std::size_t rater_count() const noexcept { return beta_r.size(); }
    std::size_t note_count() const noexcept { return beta_n.size(); }

    // Flat layout: [beta0, beta_r..., beta_n..., theta_r..., theta_n...].
    std::size_t flat_size() const noexcept { return 1 + 2 * beta_r.size() + 2 * beta_n.size(); }
    std::vector<double> to_flat() const;
    static ModelParams from_flat(std::span<const double> flat, std::size_t raters,
                                 std::size_t notes);

    // (theta_n, theta_r) -> (-theta_n, -theta_r).
    ModelParams sign_flipped() const;

    bool all_finite() const noexcept;
    // Throws ValidationError unless dimensioned for the dataset.
    void check_dimensions(const RatingsDataset& dataset) const;

    bool operator==(const ModelParams&) const = default;
};

enum class Optimizer { Adam, Sgd };

// Uniform: seeded uniform(-init_scale, init_scale) for every parameter.
// Spectral: biases from rating means, latent terms from the leading
// singular pair of the bias-removed rating matrix (see spectral_params).
enum class Init { Uniform, Spectral };

struct TrainConfig {
    double lambda = 2.5e-5;
    double bias_reg_multiplier = 5.0;
    double learning_rate = 2.5e-3;
    int epochs = 3;
    std::uint64_t seed = 0;
    double holdout_fraction = 0.1;
    double init_scale = 0.1;
    Init init = Init::Spectral;

    Optimizer optimizer = Optimizer::Sgd;
    std::size_t batch_size = 4;  // Adam only
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;

    // 1 is deterministic. With more threads Adam parallelizes its dense
    // moment update (still deterministic) and SGD runs lock-free shards
    // (not deterministic).
    unsigned threads = 1;

    // Throws ValidationError on out-of-range fields.
    void validate() const;
};

std::string_view to_token(Optimizer o) noexcept;
Optimizer optimizer_from_token(std::string_view s);
std::string_view to_token(Init i) noexcept;
Init init_from_token(std::string_view s);

// Not clamped to [0, 1]. Throws std::out_of_range on a bad index.
double predict(const ModelParams& params, std::size_t rater, std::size_t note);

// Sum of squared residuals over observed ratings
//   + m * lambda * (beta0^2 + |beta_r|^2 + |beta_n|^2)
//   + lambda * (|theta_r|^2 + |theta_n|^2)
// with m = config.bias_reg_multiplier.
double loss(const ModelParams& params, const RatingsDataset& dataset, const TrainConfig& config);

// Analytic gradient of loss(), same shape as params.
ModelParams loss_gradient(const ModelParams& params, const RatingsDataset& dataset,
                          const TrainConfig& config);

// Mean |eta - eta_hat| over observed ratings. Throws on an empty dataset.
double reconstruction_error(const ModelParams& params, const RatingsDataset& dataset);
double reconstruction_error(const ModelParams& params, const RatingsDataset& dataset,
                            std::span<const std::size_t> rows);

// Seeded uniform(-init_scale, init_scale) initialization.
ModelParams initial_params(std::size_t raters, std::size_t notes, const TrainConfig& config);

// Data-driven start on the listed rows: beta0 is the mean rating, beta_n the
// mean note residual, beta_r the mean rater residual after that; theta_r and
// theta_n are the leading singular vectors of the remaining residuals (power
// iteration from a seeded start), scaled by the least-squares amplitude of
// their outer product on the observed cells. Entities without rows stay 0.
// Falls back to uniform latent terms when the residuals carry no signal.
ModelParams spectral_params(const RatingsDataset& dataset, std::span<const std::size_t> rows,
                            const TrainConfig& config);

ModelParams train(const RatingsDataset& dataset, const TrainConfig& config);
// Trains on the listed rows only; params stay dimensioned for the full
// dataset so held-out rows can be scored.
ModelParams train(const RatingsDataset& dataset, const TrainConfig& config,
                  std::span<const std::size_t> rows);

struct LambdaSweepRow {
    double lambda = 0.0;
    double holdout_error = 0.0;
    double train_error = 0.0;
};

struct LambdaSweep {
    double best_lambda = 0.0;
    std::vector<LambdaSweepRow> table;  // one row per grid value, grid order
};

// Seeded shuffle split: the first round(holdout_fraction * n) rows of the
// permutation are held out.
struct HoldoutSplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> holdout;
};
HoldoutSplit holdout_split(std::size_t rows, double holdout_fraction, std::uint64_t seed);

// Trains once per grid value on the same split and returns the lambda with
// the lowest mean holdout |eta - eta_hat| (first one on ties).
LambdaSweep tune_lambda(const RatingsDataset& dataset, std::span<const double> grid,
                        const TrainConfig& config);

}  // namespace bridgerank
