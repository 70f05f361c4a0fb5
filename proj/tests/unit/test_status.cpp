#include <random>

#include "catch_amalgamated.hpp"

#include "bridgerank/error.hpp"
#include "bridgerank/status.hpp"
#include "bridgerank/synthetic.hpp"

using namespace bridgerank;
using Catch::Approx;

namespace {

ModelParams with_beta_n(std::vector<double> b) {
    auto p = ModelParams::zeros(0, b.size());
    p.beta_n = std::move(b);
    return p;
}

}  // namespace

TEST_CASE("assign_status uses the inclusive cutoffs") {
    StatusThresholds t;
    CHECK(assign_status(0.25, t) == NoteStatus::Helpful);
    CHECK(assign_status(0.0, t) == NoteStatus::NeedsMoreRatings);
    CHECK(assign_status(0.180, t) == NoteStatus::Helpful);
    CHECK(assign_status(-0.159, t) == NoteStatus::NotHelpful);
    CHECK(assign_status(-0.5, t) == NoteStatus::NotHelpful);
    CHECK(assign_status(0.17999, t) == NoteStatus::NeedsMoreRatings);
}

TEST_CASE("assign_status is monotone in beta_n") {
    StatusThresholds t{0.1, -0.2};
    auto rank = [](NoteStatus s) { return s == NoteStatus::NotHelpful ? 0 : s == NoteStatus::NeedsMoreRatings ? 1 : 2; };
    int prev = 0;
    for (double b = -1.0; b <= 1.0; b += 0.01) {
        int r = rank(assign_status(b, t));
        CHECK(r >= prev);
        prev = r;
    }
}

TEST_CASE("thresholds must be ordered") {
    CHECK_NOTHROW(StatusThresholds{}.validate());
    CHECK_THROWS_AS((StatusThresholds{0.1, 0.1}.validate()), ValidationError);
    CHECK_THROWS_AS((StatusThresholds{-0.3, 0.1}.validate()), ValidationError);
}

TEST_CASE("derive_thresholds takes quantiles of the disclosed classes") {
    // Helpful notes at 0.2, 0.3, ..., 1.0; NotHelpful at -1.0, ..., -0.2.
    std::vector<double> b;
    DisclosedStatuses d;
    for (int i = 0; i < 9; ++i) {
        d[b.size()] = NoteStatus::Helpful;
        b.push_back(0.2 + 0.1 * i);
    }
    for (int i = 0; i < 9; ++i) {
        d[b.size()] = NoteStatus::NotHelpful;
        b.push_back(-1.0 + 0.1 * i);
    }
    b.push_back(0.0);  // undisclosed, ignored
    auto t = derive_thresholds(with_beta_n(b), d, 0.9);
    // Linear interpolation at position 0.1 * 8 = 0.8 between 0.2 and 0.3.
    CHECK(t.helpful_min_beta == Approx(0.28));
    CHECK(t.not_helpful_max_beta == Approx(-0.28));
}

TEST_CASE("derive_thresholds errors") {
    DisclosedStatuses only_helpful{{0, NoteStatus::Helpful}};
    CHECK_THROWS_AS(derive_thresholds(with_beta_n({0.5}), only_helpful), ValidationError);

    DisclosedStatuses crossing{{0, NoteStatus::Helpful}, {1, NoteStatus::NotHelpful}};
    CHECK_THROWS_AS(derive_thresholds(with_beta_n({-0.5, 0.5}), crossing), ValidationError);
}

TEST_CASE("derive_thresholds is symmetric on a symmetric world") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> nd(0.6, 0.2);
    std::vector<double> b;
    DisclosedStatuses d;
    for (int i = 0; i < 4000; ++i) {
        double x = nd(rng);
        d[b.size()] = NoteStatus::Helpful;
        b.push_back(x);
        d[b.size()] = NoteStatus::NotHelpful;
        b.push_back(-nd(rng));
    }
    auto t = derive_thresholds(with_beta_n(b), d);
    CHECK(std::abs(t.helpful_min_beta + t.not_helpful_max_beta) < 0.03);
}

TEST_CASE("status_auc") {
    DisclosedStatuses d{{0, NoteStatus::Helpful},
                        {1, NoteStatus::Helpful},
                        {2, NoteStatus::NeedsMoreRatings},
                        {3, NoteStatus::NotHelpful}};
    auto a = status_auc(with_beta_n({0.9, 0.8, 0.0, -0.7}), d);
    CHECK(a.helpful == 1.0);
    CHECK(a.not_helpful == 1.0);

    DisclosedStatuses single{{0, NoteStatus::Helpful}, {1, NoteStatus::Helpful}};
    CHECK_THROWS_AS(status_auc(with_beta_n({0.1, 0.2}), single), ValidationError);

    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<double> b;
    DisclosedStatuses rnd;
    const NoteStatus s[] = {NoteStatus::Helpful, NoteStatus::NotHelpful, NoteStatus::NeedsMoreRatings};
    for (int i = 0; i < 6000; ++i) {
        rnd[b.size()] = s[rng() % 3];
        b.push_back(u(rng));
    }
    auto null = status_auc(with_beta_n(b), rnd);
    CHECK(std::abs(null.helpful - 0.5) < 0.05);
    CHECK(std::abs(null.not_helpful - 0.5) < 0.05);
}

TEST_CASE("trained beta_n separates planted consensus notes") {
    SyntheticWorldConfig wc;
    wc.n_raters = 500;
    wc.n_notes = 300;
    wc.ratings_per_note = 30;
    wc.noise_flip_prob = 0.1;
    wc.seed = 31;
    auto w = generate_world(wc);
    auto p = train(w.dataset, TrainConfig{});
    DisclosedStatuses d;
    for (std::size_t n = 0; n < w.labels.size(); ++n)
        d[n] = w.labels[n] == NoteArchetype::Consensus ? NoteStatus::Helpful : NoteStatus::NeedsMoreRatings;
    d[0] = NoteStatus::NotHelpful;  // both one-vs-rest problems need two classes
    CHECK(status_auc(p, d).helpful >= 0.9);
}
