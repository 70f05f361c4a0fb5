#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>

#include "bridgerank/error.hpp"
#include "bridgerank/synthetic.hpp"

namespace bridgerank {

void SyntheticWorldConfig::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw ValidationError(std::string("invalid world config: ") + what);
    };
    require(n_raters > 0 && n_notes > 0, "counts must be positive");
    require(ratings_per_note > 0, "ratings_per_note must be positive");
    require(ratings_per_note <= n_raters, "ratings_per_note exceeds n_raters");
    require(fraction_polarized >= 0 && fraction_polarized <= 1, "fraction_polarized must be in [0, 1]");
    require(noise_flip_prob >= 0 && noise_flip_prob <= 1, "noise_flip_prob must be in [0, 1]");
    require(rater_side_sd >= 0, "rater_side_sd must be nonnegative");
    require(rater_activity_exponent >= 0, "rater_activity_exponent must be nonnegative");
    require(note_sides.empty() || note_sides.size() == n_notes, "note_sides must be empty or one per note");
    for (int s : note_sides) require(s == 1 || s == -1, "note_sides entries must be +1 or -1");
}

RatingValue link_label(double eta_hat) noexcept {
    if (eta_hat >= 0.75) return RatingValue::Helpful;
    if (eta_hat <= 0.25) return RatingValue::NotHelpful;
    return RatingValue::SomewhatHelpful;
}

SyntheticWorld generate_world(const SyntheticWorldConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> jitter(0.0, 1.0);

    std::vector<int> side(cfg.n_raters);
    std::vector<double> theta_r(cfg.n_raters);
    for (std::size_t r = 0; r < cfg.n_raters; ++r) {
        side[r] = unit(rng) < 0.5 ? -1 : 1;
        theta_r[r] = side[r] * cfg.rater_side_mean + cfg.rater_side_sd * jitter(rng);
    }

    const auto n_polarized =
        static_cast<std::size_t>(std::llround(cfg.fraction_polarized * static_cast<double>(cfg.n_notes)));
    std::vector<std::size_t> perm(cfg.n_notes);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<NoteArchetype> archetype(cfg.n_notes, NoteArchetype::Consensus);
    for (std::size_t k = 0; k < n_polarized; ++k) archetype[perm[k]] = NoteArchetype::Polarized;

    std::vector<double> beta_n(cfg.n_notes), theta_n(cfg.n_notes);
    for (std::size_t n = 0; n < cfg.n_notes; ++n) {
        // Draw a sign for every note so note_sides does not shift the stream.
        const int drawn = unit(rng) < 0.5 ? -1 : 1;
        if (archetype[n] == NoteArchetype::Polarized) {
            const int s = cfg.note_sides.empty() ? drawn : cfg.note_sides[n];
            beta_n[n] = 0.0;
            theta_n[n] = s * cfg.polarized_theta_n_magnitude;
        } else {
            beta_n[n] = cfg.consensus_beta_n;
            theta_n[n] = 0.0;
        }
    }

    std::vector<double> weight;
    if (cfg.rater_activity_exponent > 0) {
        weight.resize(cfg.n_raters);
        for (std::size_t r = 0; r < cfg.n_raters; ++r)
            weight[r] = std::pow(static_cast<double>(r + 1), -cfg.rater_activity_exponent);
    }

    std::vector<std::size_t> pool(cfg.n_raters);
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<std::size_t> chosen(cfg.ratings_per_note);
    std::vector<RatingTriple> triples;
    triples.reserve(cfg.n_notes * cfg.ratings_per_note);

    for (std::size_t n = 0; n < cfg.n_notes; ++n) {
        if (weight.empty()) {
            // Partial Fisher-Yates over a persistent pool.
            for (std::size_t k = 0; k < cfg.ratings_per_note; ++k) {
                std::uniform_int_distribution<std::size_t> pick(k, cfg.n_raters - 1);
                std::swap(pool[k], pool[pick(rng)]);
                chosen[k] = pool[k];
            }
        } else {
            // Efraimidis-Spirakis weighted sampling without replacement.
            using Keyed = std::pair<double, std::size_t>;
            std::priority_queue<Keyed, std::vector<Keyed>, std::greater<>> top;
            for (std::size_t r = 0; r < cfg.n_raters; ++r) {
                const double key = std::log(unit(rng)) / weight[r];
                if (top.size() < cfg.ratings_per_note) top.emplace(key, r);
                else if (key > top.top().first) {
                    top.pop();
                    top.emplace(key, r);
                }
            }
            for (std::size_t k = 0; k < cfg.ratings_per_note; ++k) {
                chosen[k] = top.top().second;
                top.pop();
            }
        }
        for (std::size_t r : chosen) {
            const double eta_hat = cfg.global_bias + beta_n[n] + theta_n[n] * theta_r[r];
            RatingValue label = link_label(eta_hat);
            if (unit(rng) < cfg.noise_flip_prob) {
                const int shift = unit(rng) < 0.5 ? 1 : 2;
                label = static_cast<RatingValue>((static_cast<int>(label) + shift) % 3);
            }
            triples.push_back({"r" + std::to_string(r), "n" + std::to_string(n), label, std::nullopt});
        }
    }

    SyntheticWorld world;
    world.dataset = RatingsDataset::from_triples(std::move(triples));
    const auto& ds = world.dataset;
    world.truth = ModelParams::zeros(ds.rater_count(), ds.note_count());
    world.truth.beta0 = cfg.global_bias;
    world.rater_sides.resize(ds.rater_count());
    for (std::size_t r = 0; r < ds.rater_count(); ++r) {
        const auto original = std::stoul(ds.rater_ids()[r].substr(1));
        world.truth.theta_r[r] = theta_r[original];
        world.rater_sides[r] = side[original];
    }
    world.labels.resize(ds.note_count());
    for (std::size_t n = 0; n < ds.note_count(); ++n) {
        const auto original = std::stoul(ds.note_ids()[n].substr(1));
        world.truth.beta_n[n] = beta_n[original];
        world.truth.theta_n[n] = theta_n[original];
        world.labels[n] = archetype[original];
    }
    return world;
}

}  // namespace bridgerank
