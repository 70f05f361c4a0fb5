#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

#include "bridgerank/error.hpp"
#include "bridgerank/mf.hpp"

namespace bridgerank {

ModelParams ModelParams::zeros(std::size_t raters, std::size_t notes) {
    ModelParams p;
    p.beta_r.assign(raters, 0.0);
    p.theta_r.assign(raters, 0.0);
    p.beta_n.assign(notes, 0.0);
    p.theta_n.assign(notes, 0.0);
    return p;
}

std::vector<double> ModelParams::to_flat() const {
    std::vector<double> flat;
    flat.reserve(flat_size());
    flat.push_back(beta0);
    flat.insert(flat.end(), beta_r.begin(), beta_r.end());
    flat.insert(flat.end(), beta_n.begin(), beta_n.end());
    flat.insert(flat.end(), theta_r.begin(), theta_r.end());
    flat.insert(flat.end(), theta_n.begin(), theta_n.end());
    return flat;
}

ModelParams ModelParams::from_flat(std::span<const double> flat, std::size_t raters, std::size_t notes) {
    if (flat.size() != 1 + 2 * raters + 2 * notes) throw ValidationError("flat parameter vector has wrong size");
    ModelParams p;
    p.beta0 = flat[0];
    auto take = [&](std::size_t offset, std::size_t n) {
        return std::vector<double>(flat.begin() + static_cast<std::ptrdiff_t>(offset),
                                   flat.begin() + static_cast<std::ptrdiff_t>(offset + n));
    };
    p.beta_r = take(1, raters);
    p.beta_n = take(1 + raters, notes);
    p.theta_r = take(1 + raters + notes, raters);
    p.theta_n = take(1 + 2 * raters + notes, notes);
    return p;
}

ModelParams ModelParams::sign_flipped() const {
    ModelParams p = *this;
    for (auto& t : p.theta_r) t = -t;
    for (auto& t : p.theta_n) t = -t;
    return p;
}

bool ModelParams::all_finite() const noexcept {
    if (!std::isfinite(beta0)) return false;
    for (const auto* v : {&beta_r, &beta_n, &theta_r, &theta_n})
        for (double x : *v)
            if (!std::isfinite(x)) return false;
    return true;
}

void ModelParams::check_dimensions(const RatingsDataset& dataset) const {
    if (beta_r.size() != dataset.rater_count() || theta_r.size() != dataset.rater_count() ||
        beta_n.size() != dataset.note_count() || theta_n.size() != dataset.note_count())
        throw ValidationError("parameters are not dimensioned for the dataset (" +
                              std::to_string(dataset.rater_count()) + " raters, " +
                              std::to_string(dataset.note_count()) + " notes)");
}

void TrainConfig::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw ValidationError(std::string("invalid train config: ") + what);
    };
    require(lambda > 0 && std::isfinite(lambda), "lambda must be positive");
    require(bias_reg_multiplier > 0, "bias_reg_multiplier must be positive");
    require(learning_rate > 0, "learning_rate must be positive");
    require(epochs > 0, "epochs must be positive");
    require(holdout_fraction >= 0 && holdout_fraction < 1, "holdout_fraction must be in [0, 1)");
    require(init_scale >= 0, "init_scale must be nonnegative");
    require(batch_size >= 1, "batch_size must be >= 1");
    require(adam_beta1 >= 0 && adam_beta1 < 1 && adam_beta2 >= 0 && adam_beta2 < 1, "adam betas must be in [0, 1)");
    require(adam_eps > 0, "adam_eps must be positive");
    require(threads >= 1, "threads must be >= 1");
}

std::string_view to_token(Optimizer o) noexcept { return o == Optimizer::Adam ? "adam" : "sgd"; }

std::string_view to_token(Init i) noexcept { return i == Init::Uniform ? "uniform" : "spectral"; }

Init init_from_token(std::string_view s) {
    if (s == "uniform") return Init::Uniform;
    if (s == "spectral") return Init::Spectral;
    throw ValidationError("unknown init \"" + std::string(s) + "\" (expected uniform or spectral)");
}

Optimizer optimizer_from_token(std::string_view s) {
    if (s == "adam") return Optimizer::Adam;
    if (s == "sgd") return Optimizer::Sgd;
    throw ValidationError("unknown optimizer \"" + std::string(s) + "\" (expected adam or sgd)");
}

double predict(const ModelParams& p, std::size_t rater, std::size_t note) {
    if (rater >= p.beta_r.size() || rater >= p.theta_r.size()) throw std::out_of_range("rater index out of range");
    if (note >= p.beta_n.size() || note >= p.theta_n.size()) throw std::out_of_range("note index out of range");
    return p.beta0 + p.beta_n[note] + p.beta_r[rater] + p.theta_n[note] * p.theta_r[rater];
}

namespace {

constexpr std::size_t kChunk = 8192;

inline double predict_unchecked(const ModelParams& p, std::uint32_t r, std::uint32_t n) {
    return p.beta0 + p.beta_n[n] + p.beta_r[r] + p.theta_n[n] * p.theta_r[r];
}

double sum_squares(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

// Per-chunk partial sums over fixed-size chunks, reduced in chunk order so
// the result does not depend on the thread count.
template <typename F>
double chunked_sum(std::size_t n, unsigned threads, F&& term) {
    const std::size_t chunks = (n + kChunk - 1) / kChunk;
    std::vector<double> partial(chunks, 0.0);
    auto work = [&](std::size_t c) {
        double s = 0.0;
        const std::size_t end = std::min(n, (c + 1) * kChunk);
        for (std::size_t i = c * kChunk; i < end; ++i) s += term(i);
        partial[c] = s;
    };
    if (threads <= 1 || chunks <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) work(c);
    } else {
        std::vector<std::jthread> pool;
        const unsigned t = std::min<std::size_t>(threads, chunks);
        for (unsigned w = 0; w < t; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t c = w; c < chunks; c += t) work(c);
            });
    }
    double total = 0.0;
    for (double s : partial) total += s;
    return total;
}

}  // namespace

double loss(const ModelParams& p, const RatingsDataset& ds, const TrainConfig& config) {
    p.check_dimensions(ds);
    const auto raters = ds.rater_index();
    const auto notes = ds.note_index();
    const auto values = ds.values();
    const double recon = chunked_sum(ds.size(), config.threads, [&](std::size_t i) {
        const double e = values[i] - predict_unchecked(p, raters[i], notes[i]);
        return e * e;
    });
    const double bias = p.beta0 * p.beta0 + sum_squares(p.beta_r) + sum_squares(p.beta_n);
    const double latent = sum_squares(p.theta_r) + sum_squares(p.theta_n);
    return recon + config.bias_reg_multiplier * config.lambda * bias + config.lambda * latent;
}

ModelParams loss_gradient(const ModelParams& p, const RatingsDataset& ds, const TrainConfig& config) {
    p.check_dimensions(ds);
    const double bias_reg = 2.0 * config.bias_reg_multiplier * config.lambda;
    const double latent_reg = 2.0 * config.lambda;

    ModelParams g = ModelParams::zeros(p.rater_count(), p.note_count());
    g.beta0 = bias_reg * p.beta0;
    for (std::size_t r = 0; r < p.rater_count(); ++r) {
        g.beta_r[r] = bias_reg * p.beta_r[r];
        g.theta_r[r] = latent_reg * p.theta_r[r];
    }
    for (std::size_t n = 0; n < p.note_count(); ++n) {
        g.beta_n[n] = bias_reg * p.beta_n[n];
        g.theta_n[n] = latent_reg * p.theta_n[n];
    }

    const auto raters = ds.rater_index();
    const auto notes = ds.note_index();
    const auto values = ds.values();
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto r = raters[i];
        const auto n = notes[i];
        const double d = -2.0 * (values[i] - predict_unchecked(p, r, n));
        g.beta0 += d;
        g.beta_r[r] += d;
        g.beta_n[n] += d;
        g.theta_r[r] += d * p.theta_n[n];
        g.theta_n[n] += d * p.theta_r[r];
    }
    return g;
}

double reconstruction_error(const ModelParams& p, const RatingsDataset& ds, std::span<const std::size_t> rows) {
    if (rows.empty()) throw ValidationError("reconstruction error of an empty dataset");
    p.check_dimensions(ds);
    const auto raters = ds.rater_index();
    const auto notes = ds.note_index();
    const auto values = ds.values();
    double s = 0.0;
    for (auto i : rows) s += std::abs(values[i] - predict_unchecked(p, raters[i], notes[i]));
    return s / static_cast<double>(rows.size());
}

double reconstruction_error(const ModelParams& p, const RatingsDataset& ds) {
    if (ds.empty()) throw ValidationError("reconstruction error of an empty dataset");
    p.check_dimensions(ds);
    const auto raters = ds.rater_index();
    const auto notes = ds.note_index();
    const auto values = ds.values();
    const double s = chunked_sum(ds.size(), 1, [&](std::size_t i) {
        return std::abs(values[i] - predict_unchecked(p, raters[i], notes[i]));
    });
    return s / static_cast<double>(ds.size());
}

ModelParams initial_params(std::size_t raters, std::size_t notes, const TrainConfig& config) {
    ModelParams p = ModelParams::zeros(raters, notes);
    if (config.init_scale == 0.0) return p;
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> u(-config.init_scale, config.init_scale);
    p.beta0 = u(rng);
    for (auto* v : {&p.beta_r, &p.beta_n, &p.theta_r, &p.theta_n})
        for (auto& x : *v) x = u(rng);
    return p;
}

ModelParams spectral_params(const RatingsDataset& ds, std::span<const std::size_t> rows, const TrainConfig& config) {
    const std::size_t R = ds.rater_count(), N = ds.note_count();
    const auto raters = ds.rater_index();
    const auto notes = ds.note_index();
    const auto values = ds.values();
    ModelParams p = ModelParams::zeros(R, N);
    if (rows.empty()) return p;

    double mean = 0.0;
    for (auto i : rows) mean += values[i];
    p.beta0 = mean / static_cast<double>(rows.size());

    std::vector<double> sum_n(N, 0.0), cnt_n(N, 0.0), sum_r(R, 0.0), cnt_r(R, 0.0);
    for (auto i : rows) {
        sum_n[notes[i]] += values[i] - p.beta0;
        cnt_n[notes[i]] += 1.0;
    }
    for (std::size_t n = 0; n < N; ++n)
        if (cnt_n[n] > 0) p.beta_n[n] = sum_n[n] / cnt_n[n];
    for (auto i : rows) {
        sum_r[raters[i]] += values[i] - p.beta0 - p.beta_n[notes[i]];
        cnt_r[raters[i]] += 1.0;
    }
    for (std::size_t r = 0; r < R; ++r)
        if (cnt_r[r] > 0) p.beta_r[r] = sum_r[r] / cnt_r[r];

    std::vector<double> resid(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto i = rows[k];
        resid[k] = values[i] - p.beta0 - p.beta_n[notes[i]] - p.beta_r[raters[i]];
    }

    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> u(R), v(N);
    for (auto& x : u) x = normal(rng);
    auto normalize = [](std::vector<double>& x) {
        double s = 0.0;
        for (double e : x) s += e * e;
        s = std::sqrt(s);
        if (s > 0)
            for (double& e : x) e /= s;
        return s;
    };
    normalize(u);
    double sigma = 0.0;
    for (int it = 0; it < 100; ++it) {
        std::fill(v.begin(), v.end(), 0.0);
        for (std::size_t k = 0; k < rows.size(); ++k) v[notes[rows[k]]] += resid[k] * u[raters[rows[k]]];
        normalize(v);
        std::fill(u.begin(), u.end(), 0.0);
        for (std::size_t k = 0; k < rows.size(); ++k) u[raters[rows[k]]] += resid[k] * v[notes[rows[k]]];
        sigma = normalize(u);
    }

    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const double outer = u[raters[rows[k]]] * v[notes[rows[k]]];
        num += resid[k] * outer;
        den += outer * outer;
    }
    if (!(sigma > 1e-12) || !(den > 0) || !(num > 0)) {
        std::uniform_real_distribution<double> unif(-config.init_scale, config.init_scale);
        for (auto* vec : {&p.theta_r, &p.theta_n})
            for (auto& x : *vec) x = unif(rng);
        return p;
    }
    const double scale = std::sqrt(num / den);
    for (std::size_t r = 0; r < R; ++r) p.theta_r[r] = scale * u[r];
    for (std::size_t n = 0; n < N; ++n) p.theta_n[n] = scale * v[n];
    return p;
}

}  // namespace bridgerank
