#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "catch_amalgamated.hpp"

#include "bridgerank/analysis.hpp"
#include "bridgerank/error.hpp"
#include "bridgerank/ideology.hpp"
#include "bridgerank/synthetic.hpp"
#include "support.hpp"

using namespace bridgerank;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

namespace {

BipartiteFollowGraph make_graph(std::size_t users, std::size_t mps,
                                std::vector<std::pair<std::uint32_t, std::uint32_t>> edges) {
    BipartiteFollowGraph g;
    for (std::size_t u = 0; u < users; ++u) g.users.push_back("u" + std::to_string(u));
    for (std::size_t m = 0; m < mps; ++m) g.mps.push_back("m" + std::to_string(m));
    g.edges = std::move(edges);
    g.normalize();
    return g;
}

// Two MPs per party, placed at the given 1-D coordinates.
IdeologyEmbedding line_embedding(const std::vector<double>& mp_x) {
    IdeologyEmbedding e;
    e.dims = 1;
    e.mp_coords.resize(static_cast<Eigen::Index>(mp_x.size()), 1);
    for (std::size_t i = 0; i < mp_x.size(); ++i) {
        e.mps.push_back("m" + std::to_string(i));
        e.mp_coords(static_cast<Eigen::Index>(i), 0) = mp_x[i];
    }
    e.user_coords.resize(0, 1);
    e.singular_values = Eigen::VectorXd::Ones(1);
    return e;
}

}  // namespace

TEST_CASE("filter_graph thresholds are inclusive") {
    auto g = make_graph(3, 3, {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {1, 2}, {2, 0}, {2, 1}, {2, 2}});
    g.user_followers = {100, 25, 24};
    auto f = filter_graph(g);
    CHECK(f.users == std::vector<std::string>{"u1"});
    CHECK(f.mps.size() == 3);
    CHECK(f.edges.size() == 3);
    CHECK(f.user_followers == std::vector<std::int64_t>{25});
    CHECK(filter_graph(f).users == f.users);

    BipartiteFollowGraph empty;
    empty.user_followers = {};
    CHECK(filter_graph(empty).users.empty());

    auto nofollowers = make_graph(1, 1, {{0, 0}});
    CHECK_THROWS_AS(filter_graph(nofollowers), ValidationError);
}

TEST_CASE("graph normalization rejects bad input") {
    BipartiteFollowGraph g;
    g.users = {"a", "a"};
    g.mps = {"m"};
    CHECK_THROWS_AS(g.normalize(), ValidationError);
    g.users = {"a"};
    g.edges = {{0, 3}};
    CHECK_THROWS_AS(g.normalize(), ValidationError);
    g.edges = {{0, 0}, {0, 0}};
    g.normalize();
    CHECK(g.edges.size() == 1);
}

TEST_CASE("CA separates two disconnected blocks") {
    // Users 0-2 follow MPs 0-1; users 3-5 follow MPs 2-3.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> e;
    for (std::uint32_t u = 0; u < 3; ++u)
        for (std::uint32_t m = 0; m < 2; ++m) e.emplace_back(u, m);
    for (std::uint32_t u = 3; u < 6; ++u)
        for (std::uint32_t m = 2; m < 4; ++m) e.emplace_back(u, m);
    auto emb = correspondence_analysis(make_graph(6, 4, e), 1);
    REQUIRE(emb.user_coords.rows() == 6);
    double a = emb.user_coords(0, 0), b = emb.user_coords(3, 0);
    CHECK(a * b < 0);
    for (int u = 1; u < 3; ++u) CHECK(emb.user_coords(u, 0) == Approx(a));
    CHECK(emb.mp_coords(0, 0) * a > 0);
    CHECK(emb.singular_values(0) == Approx(1.0));
}

TEST_CASE("CA matches a dense SVD oracle") {
    std::mt19937_64 rng(13);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(20, 10);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> e;
    for (std::uint32_t u = 0; u < 20; ++u)
        for (std::uint32_t m = 0; m < 10; ++m)
            if (rng() % 3 == 0 || m == u % 10) {
                A(u, m) = 1.0;
                e.emplace_back(u, m);
            }
    const std::size_t d = 3;
    auto emb = correspondence_analysis(make_graph(20, 10, e), d);

    Eigen::MatrixXd P = A / A.sum();
    Eigen::VectorXd r = P.rowwise().sum(), c = P.colwise().sum().transpose();
    Eigen::MatrixXd S = r.cwiseSqrt().cwiseInverse().asDiagonal() * (P - r * c.transpose()) *
                        c.cwiseSqrt().cwiseInverse().asDiagonal();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(S, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::MatrixXd rows = r.cwiseSqrt().cwiseInverse().asDiagonal() * svd.matrixU().leftCols(d);
    Eigen::MatrixXd cols = c.cwiseSqrt().cwiseInverse().asDiagonal() * svd.matrixV().leftCols(d);

    for (std::size_t k = 0; k < d; ++k) {
        auto kk = static_cast<Eigen::Index>(k);
        CHECK(std::abs(emb.singular_values(kk) - svd.singularValues()(kk)) <= 1e-8);
        double sign = emb.user_coords.col(kk).dot(rows.col(kk)) >= 0 ? 1.0 : -1.0;
        CHECK((emb.user_coords.col(kk) - sign * rows.col(kk)).cwiseAbs().maxCoeff() <= 1e-8);
        CHECK((emb.mp_coords.col(kk) - sign * cols.col(kk)).cwiseAbs().maxCoeff() <= 1e-8);
    }

    // Standard coordinates are orthonormal under the row-margin weighting.
    Eigen::MatrixXd gram = emb.user_coords.transpose() * r.asDiagonal() * emb.user_coords;
    CHECK((gram - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() <= 1e-8);

    auto principal = correspondence_analysis(make_graph(20, 10, e), d, CaCoordinates::Principal);
    for (std::size_t k = 0; k < d; ++k) {
        auto kk = static_cast<Eigen::Index>(k);
        CHECK(principal.user_coords.col(kk).norm() ==
              Approx(emb.user_coords.col(kk).norm() * emb.singular_values(kk)));
    }
}

TEST_CASE("CA rank and margin handling") {
    auto g = make_graph(3, 3, {{0, 0}, {1, 1}, {1, 2}});
    auto emb = correspondence_analysis(g, 1);
    CHECK(emb.dropped_users == std::vector<std::string>{"u2"});
    CHECK(emb.users.size() == 2);
    CHECK_THROWS_WITH(correspondence_analysis(g, 3), ContainsSubstring("rank"));
}

TEST_CASE("CA recovers a planted 1-D homophily graph") {
    PlantedFollowSpec s;
    s.n_users = 500;
    s.n_mps = 50;
    s.dims = 1;
    s.seed = 3;
    auto w = generate_follow_graph(make_follow_config(s));
    auto emb = correspondence_analysis(w.graph, 1);
    std::vector<double> est, truth;
    for (std::size_t i = 0; i < emb.users.size(); ++i) {
        est.push_back(emb.user_coords(static_cast<Eigen::Index>(i), 0));
        auto idx = static_cast<std::size_t>(std::stoul(emb.users[i].substr(1)));
        truth.push_back(w.user_positions[idx][0]);
    }
    CHECK(std::abs(spearman(est, truth)) >= 0.9);
}

TEST_CASE("calibrate fits an affine map through party means") {
    auto emb = line_embedding({-1.0, -1.0, 1.0, 1.0});
    std::vector<std::string> party{"A", "A", "B", "B"};
    std::map<std::string, PartyScore> scores{{"A", {2.0, 0.0}}, {"B", {8.0, 1.0}}};
    auto cal = calibrate(emb, party, scores);
    CHECK(cal.left_right.weights(0) == Approx(3.0));
    CHECK(cal.left_right.intercept == Approx(5.0));
    CHECK(cal.anti_elite.weights(0) == Approx(0.5));
    CHECK(std::abs(cal.left_right.residuals.at("A")) < 1e-12);

    // Same parties listed in a different MP order.
    auto emb2 = line_embedding({1.0, -1.0, 1.0, -1.0});
    auto cal2 = calibrate(emb2, {"B", "A", "B", "A"}, scores);
    CHECK(cal2.left_right.weights(0) == Approx(cal.left_right.weights(0)));
    CHECK(cal2.left_right.intercept == Approx(cal.left_right.intercept));

    // Translating the embedding moves only the intercept.
    auto shifted = line_embedding({0.5, 0.5, 2.5, 2.5});
    auto cal3 = calibrate(shifted, party, scores);
    CHECK(cal3.left_right.weights(0) == Approx(3.0));
    CHECK(cal3.left_right.intercept == Approx(5.0 - 3.0 * 1.5));

    std::map<std::string, PartyScore> missing = scores;
    missing["C"] = {1.0, 1.0};
    CHECK_THROWS_AS(calibrate(emb, party, missing), ValidationError);

    auto flat = line_embedding({0.0, 0.0, 0.0, 0.0});
    CHECK_THROWS_AS(calibrate(flat, party, scores), ValidationError);
}

TEST_CASE("calibration residuals vanish when scores are affine in the positions") {
    // Three parties in 2-D, scores generated by an exact affine map.
    IdeologyEmbedding e;
    e.dims = 2;
    e.mps = {"m0", "m1", "m2", "m3", "m4", "m5"};
    e.mp_coords.resize(6, 2);
    e.mp_coords << 0.0, 0.0, 0.2, 0.0, 1.0, 0.3, 1.2, 0.5, -0.4, 1.0, -0.6, 1.2;
    e.user_coords.resize(2, 2);
    e.user_coords << 0.1, 0.0, 5.0, 5.0;
    e.users = {"u0", "u1"};
    e.singular_values = Eigen::Vector2d(0.9, 0.5);
    std::vector<std::string> party{"A", "A", "B", "B", "C", "C"};
    auto f = [](double x, double y) { return PartyScore{1.0 + 2.0 * x - 3.0 * y, -0.5 + 0.25 * x + y}; };
    std::map<std::string, PartyScore> scores{{"A", f(0.1, 0.0)}, {"B", f(1.1, 0.4)}, {"C", f(-0.5, 1.1)}};
    auto cal = calibrate(e, party, scores);
    for (auto& [p, res] : cal.left_right.residuals) CHECK(std::abs(res) <= 1e-6);
    for (auto& [p, res] : cal.anti_elite.residuals) CHECK(std::abs(res) <= 1e-6);

    auto users = project_users(cal, e);
    REQUIRE(users.size() == 2);
    CHECK(users[0].left_right == Approx(scores["A"].left_right));
    CHECK(users[0].anti_elite == Approx(scores["A"].anti_elite));
    CHECK(users[1].left_right == Approx(f(5.0, 5.0).left_right));
}

TEST_CASE("follow graph files round trip") {
    auto g = make_graph(2, 2, {{0, 1}, {1, 0}, {1, 1}});
    g.mp_party = {"A", "B"};
    g.user_followers = {10, 40};
    testing::TempDir dir;
    write_follow_graph(dir.path(), g);
    auto back = load_follow_graph(dir.file("edges.tsv"), dir.file("mps.tsv"), dir.file("users.tsv"));
    CHECK(back.users == g.users);
    CHECK(back.mps == g.mps);
    CHECK(back.edges == g.edges);
    CHECK(back.mp_party == g.mp_party);
    CHECK(back.user_followers == g.user_followers);

    std::map<std::string, PartyScore> s{{"A", {1.5, -2.0}}, {"B", {7.0, 0.25}}};
    write_party_scores(dir.file("party_scores.tsv"), s);
    auto s2 = load_party_scores(dir.file("party_scores.tsv"));
    CHECK(s2.at("B").anti_elite == 0.25);
    CHECK(s2.at("A").left_right == 1.5);
}
