#include <cmath>
#include <random>

#include "catch_amalgamated.hpp"

#include "bridgerank/analysis.hpp"
#include "bridgerank/error.hpp"
#include "bridgerank/synthetic.hpp"

using namespace bridgerank;
using Catch::Approx;

TEST_CASE("link quantizes at 0.25 and 0.75") {
    CHECK(link_label(1.0) == RatingValue::Helpful);
    CHECK(link_label(0.75) == RatingValue::Helpful);
    CHECK(link_label(0.74) == RatingValue::SomewhatHelpful);
    CHECK(link_label(0.26) == RatingValue::SomewhatHelpful);
    CHECK(link_label(0.25) == RatingValue::NotHelpful);
    CHECK(link_label(-3.0) == RatingValue::NotHelpful);
}

TEST_CASE("noise-free consensus note is rated Helpful by everyone") {
    SyntheticWorldConfig c;
    c.n_raters = 30;
    c.n_notes = 1;
    c.fraction_polarized = 0.0;
    c.global_bias = 0.0;
    c.consensus_beta_n = 1.0;
    c.ratings_per_note = 20;
    auto w = generate_world(c);
    REQUIRE(w.dataset.size() == 20);
    for (double v : w.dataset.values()) CHECK(v == 1.0);
    CHECK(w.labels == std::vector<NoteArchetype>{NoteArchetype::Consensus});
    CHECK(w.truth.theta_n[0] == 0.0);
    CHECK(w.truth.beta_n[0] == 1.0);
}

TEST_CASE("noise-free polarized note splits by rater side") {
    SyntheticWorldConfig c;
    c.n_raters = 40;
    c.n_notes = 1;
    c.fraction_polarized = 1.0;
    c.rater_side_mean = 1.0;
    c.rater_side_sd = 0.0;
    c.global_bias = 0.5;
    c.polarized_theta_n_magnitude = 1.0;
    c.note_sides = {+1};
    c.ratings_per_note = 40;
    auto w = generate_world(c);
    REQUIRE(w.dataset.size() == 40);
    for (std::size_t i = 0; i < w.dataset.size(); ++i) {
        int side = w.rater_sides[w.dataset.rater_index()[i]];
        CHECK(w.dataset.values()[i] == (side > 0 ? 1.0 : 0.0));
    }
}

TEST_CASE("world generation is seeded and validated") {
    SyntheticWorldConfig c;
    c.n_raters = 200;
    c.n_notes = 100;
    c.ratings_per_note = 15;
    c.noise_flip_prob = 0.2;
    c.seed = 5;
    auto a = generate_world(c);
    auto b = generate_world(c);
    CHECK(a.dataset.triples() == b.dataset.triples());
    CHECK(a.truth == b.truth);
    c.seed = 6;
    CHECK_FALSE(generate_world(c).dataset.triples() == a.dataset.triples());

    CHECK(a.dataset.size() == 1500);
    for (auto cnt : a.dataset.note_rating_counts()) CHECK(cnt == 15);
    CHECK(a.truth.rater_count() == a.dataset.rater_count());
    CHECK(a.truth.note_count() == a.dataset.note_count());

    c.ratings_per_note = 201;
    CHECK_THROWS_AS(generate_world(c), ValidationError);
    c = {};
    c.noise_flip_prob = 1.5;
    CHECK_THROWS_AS(generate_world(c), ValidationError);
}

TEST_CASE("activity skew concentrates ratings on early raters") {
    SyntheticWorldConfig c;
    c.n_raters = 300;
    c.n_notes = 200;
    c.ratings_per_note = 10;
    c.rater_activity_exponent = 1.0;
    auto w = generate_world(c);
    auto counts = w.dataset.rater_rating_counts();
    auto r0 = w.dataset.find_rater("r0");
    auto r299 = w.dataset.find_rater("r299");
    REQUIRE(r0 >= 0);
    std::size_t last = r299 >= 0 ? counts[static_cast<std::size_t>(r299)] : 0;
    CHECK(counts[static_cast<std::size_t>(r0)] > 5 * std::max<std::size_t>(last, 1));
}

TEST_CASE("follow probability") {
    std::vector<double> o{0.0}, one{1.0}, far{2.0};
    CHECK(follow_probability(0, 0, 0.0, o, far) == Approx(0.5));
    CHECK(follow_probability(0, 0, 1.0, o, o) == Approx(0.5));
    CHECK(follow_probability(0, 0, 1.0, o, one) == Approx(1.0 / (1.0 + std::exp(1.0))));
    CHECK(follow_probability(0, 0, 1.0, o, one) == Approx(0.269).margin(5e-4));
    double prev = 1.0;
    for (double d = 0.0; d < 3.0; d += 0.25) {
        std::vector<double> x{d};
        double p = follow_probability(0.3, -0.2, 1.5, o, x);
        CHECK(p <= prev);
        prev = p;
    }
}

TEST_CASE("follow graph degree matches the planted expectation") {
    PlantedFollowSpec s;
    s.n_users = 400;
    s.n_mps = 60;
    s.seed = 8;
    auto cfg = make_follow_config(s);
    auto w = generate_follow_graph(cfg);
    CHECK(w.graph.users.size() == 400);
    CHECK(w.graph.mps.size() == 60);
    double edges = static_cast<double>(w.graph.edges.size());
    CHECK(std::abs(edges - w.expected_edges) <= 3.0 * std::sqrt(w.edge_variance));

    auto again = generate_follow_graph(cfg);
    CHECK(again.graph.edges == w.graph.edges);

    cfg.gamma = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("finite-difference oracle") {
    std::vector<double> x{3.0};
    auto sq = [](std::span<const double> v) { return v[0] * v[0]; };
    CHECK(oracle_finite_difference(sq, x, 1e-6)[0] == Approx(6.0).margin(1e-6));

    std::vector<double> y{1.0, -2.0, 0.5};
    auto zero = [](std::span<const double>) { return 0.0; };
    for (double g : oracle_finite_difference(zero, y, 1e-6)) CHECK(g == 0.0);
}

TEST_CASE("pairwise AUC oracle") {
    std::vector<double> s{1.0, 0.0};
    std::vector<int> l{1, 0};
    CHECK(oracle_pairwise_auc(s, l) == 1.0);
    std::vector<double> same(6, 0.3);
    std::vector<int> l6{1, 0, 1, 0, 0, 1};
    CHECK(oracle_pairwise_auc(same, l6) == 0.5);
    std::vector<int> one_class{1, 1};
    CHECK_THROWS_AS(oracle_pairwise_auc(s, one_class), ValidationError);

    std::mt19937_64 rng(4);
    std::vector<double> sc(200);
    std::vector<int> lb(200);
    for (std::size_t i = 0; i < 200; ++i) {
        sc[i] = static_cast<double>(rng() % 20);
        lb[i] = static_cast<int>(rng() % 2);
    }
    CHECK(oracle_pairwise_auc(sc, lb) == auc_roc(sc, lb));
}

TEST_CASE("coupled world shares the rater axis") {
    SyntheticWorldConfig wc;
    wc.n_raters = 200;
    wc.n_notes = 100;
    wc.ratings_per_note = 20;
    PlantedFollowSpec fs;
    fs.dims = 2;
    fs.n_parties = 4;
    fs.n_mps = 40;
    auto cw = generate_coupled_world(wc, fs);
    REQUIRE(cw.follow.graph.users == cw.ratings.dataset.rater_ids());
    for (std::size_t r = 0; r < cw.ratings.truth.rater_count(); ++r)
        CHECK(cw.follow.user_positions[r][0] == cw.ratings.truth.theta_r[r]);
    CHECK(cw.party_scores.size() == 4);
    CHECK(cw.follow.graph.mp_party.size() == 40);

    fs.n_parties = 1;
    CHECK_THROWS_AS(generate_coupled_world(wc, fs), ValidationError);
}

TEST_CASE("country world keeps rater pools disjoint") {
    CountryWorldSpec s;
    s.countries = 3;
    s.raters_per_country = 40;
    s.notes_per_country = 60;
    s.ratings_per_note = 10;
    auto w = generate_country_world(s);
    CHECK(w.rules.countries.size() == 3);
    CHECK(w.notes.size() == 180);
    CHECK(w.note_truth.size() == 180);
    for (std::size_t i = 0; i < w.dataset.size(); ++i) {
        const auto& t = w.dataset.triples()[i];
        CHECK(w.rater_truth.at(t.rater_id) == w.note_truth.at(t.note_id));
    }
    CHECK_NOTHROW(w.rules.validate());
}
