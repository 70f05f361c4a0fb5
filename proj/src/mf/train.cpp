#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

#include "bridgerank/error.hpp"
#include "bridgerank/mf.hpp"
#include "bridgerank/util/parallel.hpp"

namespace bridgerank {

namespace {

constexpr std::uint64_t kShuffleStream = 0x9e3779b97f4a7c15ULL;

struct Layout {
    std::size_t raters, notes;
    std::size_t beta_r() const { return 1; }
    std::size_t beta_n() const { return 1 + raters; }
    std::size_t theta_r() const { return 1 + raters + notes; }
    std::size_t theta_n() const { return 1 + 2 * raters + notes; }
    std::size_t size() const { return 1 + 2 * raters + 2 * notes; }
};

[[noreturn]] void diverged(int epoch, std::size_t step) {
    throw TrainingDiverged("non-finite parameter during epoch " + std::to_string(epoch + 1) + " (step " +
                           std::to_string(step) + "); the learning rate is probably too high");
}

void check_finite(const std::vector<double>& x, int epoch) {
    for (double v : x)
        if (!std::isfinite(v)) diverged(epoch, 0);
}

// Mini-batch Adam with dense moment updates. Each step's gradient is the
// batch's reconstruction gradient plus (batch / rows) of the full
// regularization gradient, so one epoch carries the regularization once.
void train_adam(std::vector<double>& x, const Layout& L, const RatingsDataset& ds, const TrainConfig& cfg,
                std::vector<std::size_t> rows) {
    const auto raters = ds.rater_index();
    const auto notes = ds.note_index();
    const auto values = ds.values();
    const std::size_t P = L.size();
    const double M = static_cast<double>(rows.size());

    std::vector<double> reg(P, cfg.bias_reg_multiplier * cfg.lambda);
    std::fill(reg.begin() + static_cast<std::ptrdiff_t>(L.theta_r()), reg.end(), cfg.lambda);

    std::vector<double> g(P, 0.0), m(P, 0.0), v(P, 0.0);
    std::mt19937_64 rng(cfg.seed ^ kShuffleStream);

    const unsigned workers = (cfg.threads > 1 && P >= (1u << 15)) ? cfg.threads : 1;
    util::LockstepPool pool(workers);

    double b1t = 1.0, b2t = 1.0;
    std::size_t step = 0;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(rows.begin(), rows.end(), rng);
        for (std::size_t start = 0; start < rows.size(); start += cfg.batch_size) {
            const std::size_t end = std::min(rows.size(), start + cfg.batch_size);
            for (std::size_t k = start; k < end; ++k) {
                const std::size_t i = rows[k];
                const std::size_t r = raters[i], n = notes[i];
                const double tr = x[L.theta_r() + r], tn = x[L.theta_n() + n];
                const double err = values[i] - (x[0] + x[L.beta_r() + r] + x[L.beta_n() + n] + tn * tr);
                if (!std::isfinite(err)) diverged(epoch, step);
                const double d = -2.0 * err;
                g[0] += d;
                g[L.beta_r() + r] += d;
                g[L.beta_n() + n] += d;
                g[L.theta_r() + r] += d * tn;
                g[L.theta_n() + n] += d * tr;
            }
            ++step;
            b1t *= cfg.adam_beta1;
            b2t *= cfg.adam_beta2;
            const double reg_scale = 2.0 * static_cast<double>(end - start) / M;
            const double c1 = 1.0 / (1.0 - b1t), c2 = 1.0 / (1.0 - b2t);
            const double b1 = cfg.adam_beta1, b2 = cfg.adam_beta2, lr = cfg.learning_rate, eps = cfg.adam_eps;
            pool.run([&](unsigned w) {
                const auto [lo, hi] = util::stripe(P, w, workers);
                for (std::size_t p = lo; p < hi; ++p) {
                    const double gp = g[p] + reg_scale * reg[p] * x[p];
                    g[p] = 0.0;
                    m[p] = b1 * m[p] + (1.0 - b1) * gp;
                    v[p] = b2 * v[p] + (1.0 - b2) * gp * gp;
                    x[p] -= lr * (m[p] * c1) / (std::sqrt(v[p] * c2) + eps);
                }
            });
        }
        check_finite(x, epoch);
    }
}

// Plain SGD. Regularization is applied to the touched parameters scaled by
// 1 / (ratings touching that parameter), which sums to one full penalty
// per epoch. Values are accessed through atomic_ref when sharded.
template <bool Shared>
void sgd_range(std::vector<double>& x, const Layout& L, const RatingsDataset& ds, const TrainConfig& cfg,
               std::span<const std::size_t> order, const std::vector<double>& inv_count, int epoch) {
    const auto raters = ds.rater_index();
    const auto notes = ds.note_index();
    const auto values = ds.values();
    const double lr = cfg.learning_rate;
    const double bias_reg = 2.0 * cfg.bias_reg_multiplier * cfg.lambda;
    const double latent_reg = 2.0 * cfg.lambda;

    auto load = [&](std::size_t p) {
        if constexpr (Shared) return std::atomic_ref<double>(x[p]).load(std::memory_order_relaxed);
        else return x[p];
    };
    auto store = [&](std::size_t p, double v) {
        if constexpr (Shared) std::atomic_ref<double>(x[p]).store(v, std::memory_order_relaxed);
        else x[p] = v;
    };

    for (std::size_t k = 0; k < order.size(); ++k) {
        const std::size_t i = order[k];
        const std::size_t r = raters[i], n = notes[i];
        const std::size_t pb0 = 0, pbr = L.beta_r() + r, pbn = L.beta_n() + n, ptr = L.theta_r() + r,
                          ptn = L.theta_n() + n;
        const double b0 = load(pb0), br = load(pbr), bn = load(pbn), tr = load(ptr), tn = load(ptn);
        const double err = values[i] - (b0 + br + bn + tn * tr);
        if (!std::isfinite(err)) diverged(epoch, k);
        const double d = -2.0 * err;
        store(pb0, b0 - lr * (d + bias_reg * b0 * inv_count[pb0]));
        store(pbr, br - lr * (d + bias_reg * br * inv_count[pbr]));
        store(pbn, bn - lr * (d + bias_reg * bn * inv_count[pbn]));
        store(ptr, tr - lr * (d * tn + latent_reg * tr * inv_count[ptr]));
        store(ptn, tn - lr * (d * tr + latent_reg * tn * inv_count[ptn]));
    }
}

void train_sgd(std::vector<double>& x, const Layout& L, const RatingsDataset& ds, const TrainConfig& cfg,
               std::vector<std::size_t> rows) {
    std::vector<double> inv_count(L.size(), 0.0);
    {
        std::vector<std::size_t> count(L.size(), 0);
        count[0] = rows.size();
        for (auto i : rows) {
            const std::size_t r = ds.rater_index()[i], n = ds.note_index()[i];
            ++count[L.beta_r() + r];
            ++count[L.beta_n() + n];
            ++count[L.theta_r() + r];
            ++count[L.theta_n() + n];
        }
        for (std::size_t p = 0; p < L.size(); ++p)
            if (count[p]) inv_count[p] = 1.0 / static_cast<double>(count[p]);
    }

    std::mt19937_64 rng(cfg.seed ^ kShuffleStream);
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(rows.begin(), rows.end(), rng);
        if (cfg.threads <= 1) {
            sgd_range<false>(x, L, ds, cfg, rows, inv_count, epoch);
        } else {
            std::vector<std::jthread> pool;
            std::atomic<bool> failed{false};
            std::exception_ptr error;
            for (unsigned w = 0; w < cfg.threads; ++w) {
                const auto [lo, hi] = util::stripe(rows.size(), w, cfg.threads);
                pool.emplace_back([&, lo = lo, hi = hi] {
                    try {
                        sgd_range<true>(x, L, ds, cfg, std::span(rows).subspan(lo, hi - lo), inv_count, epoch);
                    } catch (...) {
                        if (!failed.exchange(true)) error = std::current_exception();
                    }
                });
            }
            pool.clear();
            if (error) std::rethrow_exception(error);
        }
        check_finite(x, epoch);
    }
}

}  // namespace

ModelParams train(const RatingsDataset& dataset, const TrainConfig& config, std::span<const std::size_t> rows) {
    config.validate();
    if (dataset.empty() || rows.empty()) throw ValidationError("cannot train on an empty dataset");
    for (auto i : rows)
        if (i >= dataset.size()) throw ValidationError("training row out of range");

    const Layout L{dataset.rater_count(), dataset.note_count()};
    std::vector<double> x = (config.init == Init::Spectral ? spectral_params(dataset, rows, config)
                                                            : initial_params(L.raters, L.notes, config))
                                .to_flat();
    std::vector<std::size_t> order(rows.begin(), rows.end());
    if (config.optimizer == Optimizer::Adam)
        train_adam(x, L, dataset, config, std::move(order));
    else
        train_sgd(x, L, dataset, config, std::move(order));
    return ModelParams::from_flat(x, L.raters, L.notes);
}

ModelParams train(const RatingsDataset& dataset, const TrainConfig& config) {
    std::vector<std::size_t> rows(dataset.size());
    std::iota(rows.begin(), rows.end(), 0);
    return train(dataset, config, rows);
}

}  // namespace bridgerank
