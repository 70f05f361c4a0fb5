#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "catch_amalgamated.hpp"

#include "cli.hpp"
#include "support.hpp"

using Catch::Matchers::ContainsSubstring;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = 0;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    Run r;
    r.code = bridgerank::cli::dispatch(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

json read_json(const std::string& path) { return json::parse(testing::read_file(path)); }

const char* kWorld = R"({"n_raters": 150, "n_notes": 80, "ratings_per_note": 20, "noise_flip_prob": 0.1,
    "follow": {"n_mps": 30, "n_parties": 4, "gamma": 0.5},
    "countries": {"countries": 2, "raters_per_country": 30, "notes_per_country": 40, "ratings_per_note": 8,
                  "labelable_fraction": 0.2}})";

}  // namespace

TEST_CASE("usage and exit codes") {
    auto help = run({"train", "--help"});
    CHECK(help.code == 0);
    CHECK_THAT(help.out, ContainsSubstring("--ratings"));

    CHECK(run({"--version"}).code == 0);
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    auto bad = run({"train", "--ratings", "x.tsv", "--out", "y", "--bogus"});
    CHECK(bad.code == 2);
    CHECK_THAT(bad.err, ContainsSubstring("--bogus"));
    CHECK(run({"train", "--out", "y"}).code == 2);
    CHECK(run({"analyze", "deletion", "--f", "0.1", "--d-helpful", "0.1", "--d-not-helpful", "0.1", "--out", "x",
               "--threads", "0"})
              .code == 2);
}

TEST_CASE("missing inputs and validation failures exit 1") {
    testing::TempDir dir;
    auto missing = run({"train", "--ratings", dir.file("nope.tsv"), "--out", dir.file("m")});
    CHECK(missing.code == 1);
    CHECK_THAT(missing.err, ContainsSubstring(dir.file("nope.tsv")));

    testing::write_file(dir.file("world.json"), R"({"n_raters": 10, "bogus_key": 1})");
    auto unknown = run({"simulate", "--config", dir.file("world.json"), "--out", dir.file("w")});
    CHECK(unknown.code == 1);
    CHECK_THAT(unknown.err, ContainsSubstring("bogus_key"));

    auto bad_rate = run({"analyze", "deletion", "--f", "2", "--d-helpful", "0.1", "--d-not-helpful", "0.1", "--out",
                         dir.file("d")});
    CHECK(bad_rate.code == 1);
    CHECK_THAT(bad_rate.err, ContainsSubstring("error: "));
}

TEST_CASE("manifest digests") {
    testing::TempDir dir;
    testing::write_file(dir.file("abc.txt"), "abc");
    CHECK(bridgerank::cli::sha256_file(dir.file("abc.txt")) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");

    REQUIRE(run({"analyze", "corr", "--r", "0.744", "--n", "109", "--out", dir.file("c")}).code == 0);
    auto m = read_json(dir.file("c/manifest.json"));
    CHECK(m.at("subcommand") == "analyze corr");
    CHECK(m.at("version") == std::string(bridgerank::cli::kVersion));
    CHECK(m.contains("wall_time_ms"));
    CHECK(m.at("threads") == 1);
    auto c = read_json(dir.file("c/corr.json"));
    CHECK(std::abs(c.at("ci_lo").get<double>() - 0.65) <= 0.01);
    CHECK(std::abs(c.at("ci_hi").get<double>() - 0.82) <= 0.01);
}

TEST_CASE("seed precedence") {
    testing::TempDir dir;
    testing::write_file(dir.file("w.json"), R"({"n_raters": 40, "n_notes": 20, "ratings_per_note": 5, "seed": 7})");
    ::setenv("BRIDGERANK_SEED", "99", 1);
    REQUIRE(run({"simulate", "--out", dir.file("env")}).code == 0);
    REQUIRE(run({"simulate", "--config", dir.file("w.json"), "--out", dir.file("file")}).code == 0);
    REQUIRE(run({"simulate", "--config", dir.file("w.json"), "--seed", "3", "--out", dir.file("flag")}).code == 0);
    ::unsetenv("BRIDGERANK_SEED");
    REQUIRE(run({"simulate", "--out", dir.file("none")}).code == 0);
    CHECK(read_json(dir.file("env/manifest.json")).at("seed") == 99);
    CHECK(read_json(dir.file("file/manifest.json")).at("seed") == 7);
    CHECK(read_json(dir.file("flag/manifest.json")).at("seed") == 3);
    CHECK(read_json(dir.file("none/manifest.json")).at("seed") == 0);

    ::setenv("BRIDGERANK_SEED", "abc", 1);
    CHECK(run({"simulate", "--out", dir.file("bad")}).code == 1);
    ::unsetenv("BRIDGERANK_SEED");
}

TEST_CASE("synthetic pipeline") {
    testing::TempDir dir;
    testing::write_file(dir.file("world.json"), kWorld);
    const auto sim = dir.file("sim");
    REQUIRE(run({"simulate", "--config", dir.file("world.json"), "--seed", "4", "--out", sim}).code == 0);
    for (auto f : {"ratings.tsv", "notes.tsv", "truth.tsv", "manifest.json", "follow/edges.tsv", "follow/mps.tsv",
                   "follow/users.tsv", "follow/party_scores.tsv", "countries/ratings.tsv", "countries/rules.json"})
        CHECK(fs::exists(fs::path(sim) / f));
    CHECK_THAT(testing::read_file(sim + "/truth.tsv"), ContainsSubstring("entity_type\tid\tbeta\ttheta\tlabel\n"));

    SECTION("ingest keeps a preprocessed copy") {
        REQUIRE(run({"ingest", "--ratings", sim + "/ratings.tsv", "--notes", sim + "/notes.tsv", "--out",
                     dir.file("in")})
                    .code == 0);
        auto s = read_json(dir.file("in/ingest.json"));
        CHECK(s.at("ratings_out").get<std::size_t>() <= s.at("ratings_in").get<std::size_t>());
        CHECK(fs::exists(dir.file("in/notes.tsv")));
    }
    SECTION("train, status, tune") {
        const auto model = dir.file("model");
        REQUIRE(run({"train", "--ratings", sim + "/ratings.tsv", "--lambda", "1e-4", "--out", model}).code == 0);
        auto cfg = read_json(model + "/model.json");
        CHECK(cfg.dump().find("0.0001") != std::string::npos);
        CHECK(fs::exists(model + "/raters.tsv"));

        REQUIRE(run({"status", "--params", model, "--thresholds", "0.1:-0.1", "--out", dir.file("st")}).code == 0);
        auto st = testing::read_file(dir.file("st/status.tsv"));
        CHECK(st.rfind("note_id\tbeta_n\ttheta_n\tstatus\n", 0) == 0);
        CHECK(run({"status", "--params", model, "--thresholds", "0.1:0.2", "--out", dir.file("bad")}).code == 1);
        CHECK(run({"status", "--params", model, "--thresholds", "0.1:-0.1", "--derive-from", "x", "--out",
                   dir.file("both")})
                  .code == 2);

        // Derive thresholds from the statuses just written.
        REQUIRE(run({"status", "--params", model, "--derive-from", dir.file("st/status.tsv"), "--out",
                     dir.file("st2")})
                    .code == 0);
        auto th = read_json(dir.file("st2/thresholds.json"));
        CHECK(th.at("helpful_min_beta").get<double>() >= 0.1);

        REQUIRE(run({"tune", "--ratings", sim + "/ratings.tsv", "--grid", "1e-4,1", "--out", dir.file("tune")}).code ==
                0);
        auto sweep = testing::read_file(dir.file("tune/lambda_sweep.csv"));
        CHECK(std::count(sweep.begin(), sweep.end(), '\n') == 3);
    }
    SECTION("scale with survey calibration") {
        REQUIRE(run({"scale", "--graph", sim + "/follow", "--survey", sim + "/follow/party_scores.tsv", "--no-filter",
                     "--out", dir.file("scale")})
                    .code == 0);
        for (auto f : {"user_coords.tsv", "mp_coords.tsv", "singular_values.tsv", "user_scores.tsv",
                       "calibration.json"})
            CHECK(fs::exists(fs::path(dir.file("scale")) / f));
    }
    SECTION("segment") {
        REQUIRE(run({"segment", "--ratings", sim + "/countries/ratings.tsv", "--notes", sim + "/countries/notes.tsv",
                     "--rules", sim + "/countries/rules.json", "--out", dir.file("seg")})
                    .code == 0);
        CHECK(fs::exists(dir.file("seg/assignment.tsv")));
        CHECK(read_json(dir.file("seg/segment.json")).at("converged") == true);
    }
    SECTION("report") {
        testing::write_file(sim + "/pipeline.json",
                            R"({"ratings": "ratings.tsv", "truth": "truth.tsv", "train": {"epochs": 4}})");
        auto r = run({"report", "--config", sim + "/pipeline.json", "--out", dir.file("rep")});
        REQUIRE(r.code == 0);
        auto summary = testing::read_file(dir.file("rep/summary.tsv"));
        CHECK_THAT(summary, ContainsSubstring("auc_consensus_vs_polarized"));
        CHECK_THAT(summary, ContainsSubstring("theta_sign_agreement"));
        CHECK(read_json(dir.file("rep/manifest.json")).at("config").dump().find("\"epochs\":4") != std::string::npos);
    }
}

TEST_CASE("analyze subcommands") {
    testing::TempDir dir;
    testing::write_file(dir.file("scores.tsv"), "score\tlabel\tgroup\n0.9\t1\ta\n0.8\t1\ta\n0.3\t0\tb\n0.1\t0\tb\n"
                                                "0.7\t1\ta\n0.2\t0\tb\n");
    REQUIRE(run({"analyze", "auc", "--input", dir.file("scores.tsv"), "--out", dir.file("auc")}).code == 0);
    CHECK(read_json(dir.file("auc/auc.json")).at("auc") == 1.0);

    REQUIRE(run({"analyze", "deletion", "--f", "0.13", "--d-helpful", "0.16", "--d-not-helpful", "0.15", "--out",
                 dir.file("del")})
                .code == 0);
    CHECK(std::abs(read_json(dir.file("del/deletion.json")).at("observed_rate").get<double>() - 0.129) <= 0.0005);

    REQUIRE(run({"analyze", "bootstrap", "--input", dir.file("scores.tsv"), "--value", "score", "--replicates", "50",
                 "--out", dir.file("boot")})
                .code == 0);
    auto b = read_json(dir.file("boot/bootstrap.json"));
    CHECK(b.at("lo").get<double>() <= b.at("point").get<double>());

    REQUIRE(run({"analyze", "permutation", "--input", dir.file("scores.tsv"), "--value", "score", "--group", "group",
                 "--permutations", "200", "--out", dir.file("perm")})
                .code == 0);
    CHECK(read_json(dir.file("perm/permutation.json")).at("group_a") == "a");

    testing::write_file(dir.file("a.tsv"), "term\tcount\nvote\t30\ntax\t10\n");
    testing::write_file(dir.file("b.tsv"), "term\tcount\nvote\t10\ntax\t30\n");
    REQUIRE(run({"analyze", "chisq", "--a", dir.file("a.tsv"), "--b", dir.file("b.tsv"), "--out", dir.file("chi")})
                .code == 0);
    CHECK_THAT(testing::read_file(dir.file("chi/chisq.tsv")), ContainsSubstring("vote"));

    REQUIRE(run({"analyze", "corr", "--input", dir.file("scores.tsv"), "--x", "score", "--y", "label", "--out",
                 dir.file("corr")})
                .code == 0);
    CHECK(read_json(dir.file("corr/corr.json")).at("pearson").get<double>() > 0.8);
    CHECK(run({"analyze", "corr", "--out", dir.file("nothing")}).code != 0);
}
