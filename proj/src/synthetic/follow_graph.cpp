#include <cmath>
#include <random>

#include "bridgerank/error.hpp"
#include "bridgerank/synthetic.hpp"

namespace bridgerank {

void FollowWorldConfig::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw ValidationError(std::string("invalid follow-world config: ") + what);
    };
    require(gamma > 0, "gamma must be positive");
    require(user_activity.size() == user_positions.size(), "one activity per user");
    require(mp_popularity.size() == mp_positions.size(), "one popularity per MP");
    require(mp_party.empty() || mp_party.size() == mp_positions.size(), "mp_party must be empty or one per MP");
    require(user_followers.empty() || user_followers.size() == user_positions.size(),
            "user_followers must be empty or one per user");
    std::size_t dim = 0;
    bool first = true;
    for (const auto* group : {&user_positions, &mp_positions})
        for (const auto& pos : *group) {
            if (first) dim = pos.size(), first = false;
            require(pos.size() == dim && dim > 0, "positions must share one positive dimension");
        }
}

double follow_probability(double activity, double popularity, double gamma, std::span<const double> u,
                          std::span<const double> m) {
    double d2 = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) d2 += (u[k] - m[k]) * (u[k] - m[k]);
    const double z = activity + popularity - gamma * d2;
    return 1.0 / (1.0 + std::exp(-z));
}

FollowWorld generate_follow_graph(const FollowWorldConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    FollowWorld w;
    auto& g = w.graph;
    for (std::size_t i = 0; i < cfg.user_positions.size(); ++i) g.users.push_back("u" + std::to_string(i));
    for (std::size_t j = 0; j < cfg.mp_positions.size(); ++j) g.mps.push_back("mp" + std::to_string(j));
    g.mp_party = cfg.mp_party;
    g.user_followers = cfg.user_followers;

    for (std::size_t i = 0; i < cfg.user_positions.size(); ++i) {
        for (std::size_t j = 0; j < cfg.mp_positions.size(); ++j) {
            const double p = follow_probability(cfg.user_activity[i], cfg.mp_popularity[j], cfg.gamma,
                                                cfg.user_positions[i], cfg.mp_positions[j]);
            w.expected_edges += p;
            w.edge_variance += p * (1.0 - p);
            if (unit(rng) < p)
                g.edges.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
        }
    }
    g.normalize();
    w.user_positions = cfg.user_positions;
    w.mp_positions = cfg.mp_positions;
    return w;
}

FollowWorldConfig make_follow_config(const PlantedFollowSpec& s) {
    if (s.dims == 0) throw ValidationError("planted follow world needs dims >= 1");
    std::mt19937_64 rng(s.seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    FollowWorldConfig cfg;
    cfg.gamma = s.gamma;
    cfg.seed = s.seed + 1;
    for (std::size_t i = 0; i < s.n_users; ++i) {
        std::vector<double> pos(s.dims);
        for (auto& x : pos) x = s.position_sd * normal(rng);
        cfg.user_positions.push_back(std::move(pos));
        cfg.user_activity.push_back(s.activity_mean + s.activity_sd * normal(rng));
        // Platform follower counts are outside the homophily model.
        cfg.user_followers.push_back(static_cast<std::int64_t>(std::exp(4.0 + normal(rng))));
    }

    std::vector<std::vector<double>> centers(s.n_parties, std::vector<double>(s.dims));
    for (auto& c : centers)
        for (auto& x : c) x = s.position_sd * normal(rng);
    for (std::size_t j = 0; j < s.n_mps; ++j) {
        std::vector<double> pos(s.dims);
        if (s.n_parties > 0) {
            const std::size_t party = j % s.n_parties;
            for (std::size_t k = 0; k < s.dims; ++k) pos[k] = centers[party][k] + s.party_spread * normal(rng);
            cfg.mp_party.push_back("p" + std::to_string(party));
        } else {
            for (auto& x : pos) x = s.position_sd * normal(rng);
        }
        cfg.mp_positions.push_back(std::move(pos));
        cfg.mp_popularity.push_back(s.popularity_mean + s.popularity_sd * normal(rng));
    }
    return cfg;
}

}  // namespace bridgerank
