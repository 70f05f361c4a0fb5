#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "bridgerank/country.hpp"
#include "bridgerank/dataset.hpp"
#include "bridgerank/ideology.hpp"
#include "bridgerank/mf.hpp"

namespace bridgerank {

enum class NoteArchetype { Consensus, Polarized };

struct SyntheticWorldConfig {
    std::size_t n_raters = 2000;
    std::size_t n_notes = 1000;
    double fraction_polarized = 0.5;
    // Rater ideology: equal mixture of N(-mean, sd) and N(+mean, sd).
    double rater_side_mean = 1.0;
    double rater_side_sd = 0.3;
    double global_bias = 0.5;
    double consensus_beta_n = 0.5;
    double polarized_theta_n_magnitude = 0.5;
    std::size_t ratings_per_note = 40;
    double noise_flip_prob = 0.0;
    std::uint64_t seed = 0;
    // Rater i is drawn with weight (i + 1)^-exponent; 0 means uniform.
    double rater_activity_exponent = 0.0;
    // Optional per-note sign (+1/-1) for polarized notes; empty means random.
    std::vector<int> note_sides;

    void validate() const;
};

struct SyntheticWorld {
    RatingsDataset dataset;
    ModelParams truth;
    std::vector<NoteArchetype> labels;  // by dense note index
    std::vector<int> rater_sides;       // +1 / -1 by dense rater index
};

// Quantizing link from planted eta_hat to a label.
RatingValue link_label(double eta_hat) noexcept;

// Raters are "r<i>", notes "n<j>". truth, labels and rater_sides follow the
// dataset's dense indices; raters that drew no ratings are absent.
SyntheticWorld generate_world(const SyntheticWorldConfig& config);

// Follow-graph generator for the logistic homophily model
//   P(user i follows MP j) = logistic(alpha_i + beta_j - gamma * |phi_i - phi_j|^2).
struct FollowWorldConfig {
    double gamma = 1.0;
    std::vector<double> user_activity;   // alpha_i
    std::vector<double> mp_popularity;   // beta_j
    std::vector<std::vector<double>> user_positions;  // phi_i, all same dim
    std::vector<std::vector<double>> mp_positions;    // phi_j
    std::vector<std::string> mp_party;   // optional, one per MP
    std::vector<std::int64_t> user_followers;  // optional platform follower counts
    std::uint64_t seed = 0;

    void validate() const;
};

double follow_probability(double activity, double popularity, double gamma,
                          std::span<const double> user_pos, std::span<const double> mp_pos);

struct FollowWorld {
    BipartiteFollowGraph graph;
    std::vector<std::vector<double>> user_positions;
    std::vector<std::vector<double>> mp_positions;
    double expected_edges = 0.0;  // sum of planted probabilities
    double edge_variance = 0.0;   // sum of p(1 - p)
};

FollowWorld generate_follow_graph(const FollowWorldConfig& config);

// Convenience sampler for planted positions.
struct PlantedFollowSpec {
    std::size_t n_users = 500;
    std::size_t n_mps = 50;
    std::size_t dims = 1;
    double gamma = 2.0;
    double activity_mean = 0.0;
    double activity_sd = 0.5;
    double popularity_mean = 0.0;
    double popularity_sd = 0.5;
    double position_sd = 1.0;
    // When > 0, MPs are grouped into this many parties with centers drawn
    // N(0, position_sd) and members scattered N(0, party_spread) around them.
    std::size_t n_parties = 0;
    double party_spread = 0.15;
    std::uint64_t seed = 0;
};

FollowWorldConfig make_follow_config(const PlantedFollowSpec& spec);

// A rating world whose raters are also the users of a follow graph: each
// rater's first planted position is its planted theta_r, so follow-graph
// ideology and rating behaviour share one latent axis. Remaining dimensions
// are independent noise. Party survey scores are the mean planted MP
// position per party (left_right from dimension 1, anti_elite from 2).
struct CoupledWorld {
    SyntheticWorld ratings;
    FollowWorld follow;  // users named after rater ids, same order
    std::map<std::string, PartyScore> party_scores;
};

CoupledWorld generate_coupled_world(const SyntheticWorldConfig& ratings, const PlantedFollowSpec& follow);

// Countries with disjoint rater pools. Every note carries its country's
// language; a labelable_fraction of them also cite a national outlet, the
// rest cite nothing country-specific.
struct CountryWorldSpec {
    std::size_t countries = 3;
    std::size_t raters_per_country = 100;
    std::size_t notes_per_country = 300;
    std::size_t ratings_per_note = 20;
    double labelable_fraction = 0.1;
    std::uint64_t seed = 0;
};

struct CountryWorld {
    RatingsDataset dataset;
    std::vector<NoteMeta> notes;
    CountryRules rules;
    std::map<std::string, std::string> note_truth;   // note id -> country
    std::map<std::string, std::string> rater_truth;  // rater id -> country
};

CountryWorld generate_country_world(const CountryWorldSpec& spec);

// Central differences per coordinate.
std::vector<double> oracle_finite_difference(const std::function<double(std::span<const double>)>& f,
                                             std::span<const double> x, double h);

// Fraction of (positive, negative) pairs ordered correctly, ties 0.5.
// Throws ValidationError when a class is absent.
double oracle_pairwise_auc(std::span<const double> scores, std::span<const int> labels);

}  // namespace bridgerank
