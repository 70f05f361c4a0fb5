#include <algorithm>
#include <random>

#include "bridgerank/error.hpp"
#include "bridgerank/synthetic.hpp"

namespace bridgerank {

CoupledWorld generate_coupled_world(const SyntheticWorldConfig& ratings, const PlantedFollowSpec& follow) {
    if (follow.n_parties < 2) throw ValidationError("coupled world needs at least 2 parties");
    CoupledWorld w;
    w.ratings = generate_world(ratings);
    const auto& ds = w.ratings.dataset;

    PlantedFollowSpec spec = follow;
    spec.n_users = ds.rater_count();
    auto cfg = make_follow_config(spec);
    for (std::size_t r = 0; r < ds.rater_count(); ++r) cfg.user_positions[r][0] = w.ratings.truth.theta_r[r];
    w.follow = generate_follow_graph(cfg);
    w.follow.graph.users = ds.rater_ids();

    std::map<std::string, std::pair<std::vector<double>, std::size_t>> sums;
    for (std::size_t j = 0; j < cfg.mp_positions.size(); ++j) {
        auto& [sum, count] = sums[cfg.mp_party[j]];
        sum.resize(spec.dims, 0.0);
        for (std::size_t k = 0; k < spec.dims; ++k) sum[k] += cfg.mp_positions[j][k];
        ++count;
    }
    for (const auto& [party, acc] : sums) {
        const auto& [sum, count] = acc;
        PartyScore score;
        score.left_right = sum[0] / static_cast<double>(count);
        score.anti_elite = spec.dims > 1 ? sum[1] / static_cast<double>(count) : 0.0;
        w.party_scores[party] = score;
    }
    return w;
}

CountryWorld generate_country_world(const CountryWorldSpec& s) {
    static const char* const kLanguages[] = {"ja", "pt", "de", "fr", "es", "it", "nl", "pl", "ko", "tr"};
    static const char* const kTlds[] = {"jp", "br", "de", "fr", "es", "it", "nl", "pl", "kr", "tr"};
    constexpr std::size_t kMax = std::size(kLanguages);
    if (s.countries == 0 || s.countries > kMax)
        throw ValidationError("country world supports 1 to " + std::to_string(kMax) + " countries");
    if (s.ratings_per_note > s.raters_per_country)
        throw ValidationError("ratings_per_note exceeds raters_per_country");
    if (!(s.labelable_fraction >= 0 && s.labelable_fraction <= 1))
        throw ValidationError("labelable_fraction must be in [0, 1]");

    std::mt19937_64 rng(s.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> label(0, 2);
    CountryWorld w;
    std::vector<RatingTriple> triples;
    std::vector<std::size_t> pool(s.raters_per_country);

    for (std::size_t c = 0; c < s.countries; ++c) {
        const std::string country = "country" + std::to_string(c);
        const std::string outlet = "news" + std::to_string(c) + "." + kTlds[c];
        CountryRule rule;
        rule.languages.insert(kLanguages[c]);
        rule.tlds.insert(kTlds[c]);
        rule.outlets.insert(outlet);
        w.rules.countries[country] = rule;

        for (std::size_t r = 0; r < s.raters_per_country; ++r)
            w.rater_truth["c" + std::to_string(c) + "r" + std::to_string(r)] = country;
        for (std::size_t n = 0; n < s.notes_per_country; ++n) {
            NoteMeta meta;
            meta.note_id = "c" + std::to_string(c) + "n" + std::to_string(n);
            meta.language = kLanguages[c];
            meta.classification = NoteClassification::MisinformedOrMisleading;
            if (unit(rng) < s.labelable_fraction) meta.cited_domains.push_back(outlet);
            w.note_truth[meta.note_id] = country;

            for (std::size_t r = 0; r < pool.size(); ++r) pool[r] = r;
            std::shuffle(pool.begin(), pool.end(), rng);
            for (std::size_t k = 0; k < s.ratings_per_note; ++k) {
                const auto value = static_cast<RatingValue>(label(rng));
                triples.push_back({"c" + std::to_string(c) + "r" + std::to_string(pool[k]), meta.note_id, value,
                                   std::nullopt});
            }
            w.notes.push_back(std::move(meta));
        }
    }
    w.dataset = RatingsDataset::from_triples(std::move(triples));
    return w;
}

}  // namespace bridgerank
