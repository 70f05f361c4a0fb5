#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "bridgerank/error.hpp"
#include "bridgerank/mf.hpp"

namespace bridgerank {

HoldoutSplit holdout_split(std::size_t rows, double holdout_fraction, std::uint64_t seed) {
    if (holdout_fraction < 0 || holdout_fraction >= 1) throw ValidationError("holdout_fraction must be in [0, 1)");
    std::vector<std::size_t> perm(rows);
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto n_hold = static_cast<std::size_t>(std::llround(holdout_fraction * static_cast<double>(rows)));
    HoldoutSplit split;
    split.holdout.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_hold));
    split.train.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_hold), perm.end());
    return split;
}

LambdaSweep tune_lambda(const RatingsDataset& dataset, std::span<const double> grid, const TrainConfig& config) {
    if (grid.empty()) throw ValidationError("lambda grid is empty");
    if (config.holdout_fraction <= 0) throw ValidationError("tune_lambda needs holdout_fraction > 0");
    const auto split = holdout_split(dataset.size(), config.holdout_fraction, config.seed);
    if (split.holdout.empty() || split.train.empty())
        throw ValidationError("holdout split leaves an empty side; dataset too small");

    LambdaSweep sweep;
    for (double lambda : grid) {
        TrainConfig cfg = config;
        cfg.lambda = lambda;
        const auto params = train(dataset, cfg, split.train);
        sweep.table.push_back({lambda, reconstruction_error(params, dataset, split.holdout),
                               reconstruction_error(params, dataset, split.train)});
    }
    const auto best = std::min_element(sweep.table.begin(), sweep.table.end(),
                                       [](const auto& a, const auto& b) { return a.holdout_error < b.holdout_error; });
    sweep.best_lambda = best->lambda;
    return sweep;
}

}  // namespace bridgerank
