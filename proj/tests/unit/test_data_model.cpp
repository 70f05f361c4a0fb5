#include <sstream>

#include "catch_amalgamated.hpp"

#include "bridgerank/dataset.hpp"
#include "bridgerank/domain.hpp"
#include "bridgerank/dump_adapter.hpp"
#include "bridgerank/error.hpp"
#include "bridgerank/preprocess.hpp"
#include "bridgerank/rating.hpp"
#include "bridgerank/tsv_io.hpp"
#include "support.hpp"

using namespace bridgerank;
using Catch::Matchers::ContainsSubstring;

namespace {

RatingTriple rt(const std::string& r, const std::string& n, RatingValue v = RatingValue::Helpful) {
    return {r, n, v, std::nullopt};
}

}  // namespace

TEST_CASE("rating encoding") {
    CHECK(encode_rating(RatingValue::Helpful) == 1.0);
    CHECK(encode_rating(RatingValue::SomewhatHelpful) == 0.5);
    CHECK(encode_rating(RatingValue::NotHelpful) == 0.0);
    for (auto v : {RatingValue::Helpful, RatingValue::SomewhatHelpful, RatingValue::NotHelpful}) {
        CHECK(decode_rating(encode_rating(v)) == v);
        CHECK(rating_from_token(to_token(v)) == v);
    }
    CHECK_FALSE(decode_rating(0.25).has_value());
    CHECK_FALSE(rating_from_token("helpful").has_value());
}

TEST_CASE("dataset index maps follow first appearance") {
    auto ds = RatingsDataset::from_triples({rt("b", "n2"), rt("a", "n1"), rt("b", "n1", RatingValue::NotHelpful)});
    REQUIRE(ds.rater_count() == 2);
    REQUIRE(ds.note_count() == 2);
    CHECK(ds.rater_ids() == std::vector<std::string>{"b", "a"});
    CHECK(ds.find_rater("a") == 1);
    CHECK(ds.find_note("missing") == -1);
    CHECK(ds.values()[2] == 0.0);
    CHECK(ds.note_rating_counts() == std::vector<std::size_t>{1, 2});
    CHECK(ds.rater_rating_counts() == std::vector<std::size_t>{2, 1});

    std::vector<std::size_t> rows{2};
    auto sub = ds.subset(rows);
    CHECK(sub.size() == 1);
    CHECK(sub.rater_ids() == std::vector<std::string>{"b"});
}

TEST_CASE("dataset rejects duplicate pairs") {
    CHECK_THROWS_AS(RatingsDataset::from_triples({rt("a", "n"), rt("a", "n", RatingValue::NotHelpful)}),
                    ValidationError);
}

TEST_CASE("preprocess keeps a dataset that already passes both filters") {
    std::vector<RatingTriple> t;
    for (int r = 0; r < 10; ++r)
        for (int n = 0; n < 10; ++n) t.push_back(rt("r" + std::to_string(r), "n" + std::to_string(n)));
    auto ds = RatingsDataset::from_triples(t);
    auto out = preprocess(ds);
    CHECK(out.triples() == ds.triples());
}

TEST_CASE("preprocess drops an under-rated note but keeps its raters") {
    // 12 raters rate 10 common notes; four of them also rate note x.
    std::vector<RatingTriple> t;
    for (int r = 0; r < 12; ++r)
        for (int n = 0; n < 10; ++n) t.push_back(rt("r" + std::to_string(r), "n" + std::to_string(n)));
    for (int r = 0; r < 4; ++r) t.push_back(rt("r" + std::to_string(r), "x"));
    auto out = preprocess(RatingsDataset::from_triples(t));
    CHECK(out.size() == 120);
    CHECK(out.rater_count() == 12);
    CHECK(out.note_count() == 10);
    CHECK(out.find_note("x") == -1);
}

TEST_CASE("preprocess is a single pass per filter") {
    // Note y has exactly 5 ratings on input; one comes from a rater with too
    // few ratings, so y survives with 4 after the rater pass.
    std::vector<RatingTriple> t;
    for (int r = 0; r < 10; ++r)
        for (int n = 0; n < 10; ++n) t.push_back(rt("r" + std::to_string(r), "n" + std::to_string(n)));
    for (int r = 0; r < 4; ++r) t.push_back(rt("r" + std::to_string(r), "y"));
    t.push_back(rt("lonely", "y"));
    auto ds = RatingsDataset::from_triples(t);

    auto out = preprocess(ds);
    CHECK(out.find_rater("lonely") == -1);
    REQUIRE(out.find_note("y") >= 0);
    CHECK(out.note_rating_counts()[static_cast<std::size_t>(out.find_note("y"))] == 4);
    CHECK(out.size() <= ds.size());

    PreprocessOptions fix;
    fix.iterate_to_fixpoint = true;
    CHECK(preprocess(ds, fix).find_note("y") == -1);
}

TEST_CASE("preprocess honours the note filter and empty input") {
    CHECK(preprocess(RatingsDataset{}).empty());
    std::vector<RatingTriple> t;
    for (int r = 0; r < 10; ++r)
        for (int n = 0; n < 11; ++n) t.push_back(rt("r" + std::to_string(r), "n" + std::to_string(n)));
    PreprocessOptions opt;
    opt.note_filter = {"n0"};
    auto out = preprocess(RatingsDataset::from_triples(t), opt);
    CHECK(out.note_count() == 10);
    CHECK(out.find_note("n0") == -1);

    opt.min_ratings_per_note = 0;
    CHECK_THROWS_AS(preprocess(RatingsDataset::from_triples(t), opt), ValidationError);
}

TEST_CASE("ratings TSV") {
    const std::string header = "rater_id\tnote_id\trating\tcreated_at_ms\n";

    SECTION("single row") {
        std::istringstream in(header + "r1\tn1\tHELPFUL\t0\n");
        auto ds = read_ratings_tsv(in, "mem");
        REQUIRE(ds.size() == 1);
        CHECK(ds.triples()[0].created_at_ms == 0);
        CHECK(ds.values()[0] == 1.0);
    }
    SECTION("round trip is byte identical") {
        const std::string text = header + "r1\tn1\tHELPFUL\t17\nr2\tn1\tSOMEWHAT_HELPFUL\t\nr1\tn2\tNOT_HELPFUL\t5\n";
        std::istringstream in(text);
        std::ostringstream out;
        write_ratings_tsv(out, read_ratings_tsv(in, "mem"));
        CHECK(out.str() == text);
    }
    SECTION("duplicate pair names its line") {
        std::istringstream in(header + "r1\tn1\tHELPFUL\t\nr1\tn1\tNOT_HELPFUL\t\n");
        try {
            read_ratings_tsv(in, "dup.tsv");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 3);
            CHECK_THAT(e.what(), ContainsSubstring("dup.tsv"));
        }
    }
    SECTION("unknown enum value is named") {
        std::istringstream in(header + "r1\tn1\tVERY_HELPFUL\t\n");
        CHECK_THROWS_WITH(read_ratings_tsv(in, "x"), ContainsSubstring("VERY_HELPFUL"));
    }
    SECTION("header and line endings are enforced") {
        std::istringstream bad_header("rater\tnote\trating\tcreated_at_ms\n");
        CHECK_THROWS_AS(read_ratings_tsv(bad_header, "x"), ParseError);
        std::istringstream crlf(header + "r1\tn1\tHELPFUL\t\r\n");
        CHECK_THROWS_AS(read_ratings_tsv(crlf, "x"), ParseError);
        std::istringstream short_row(header + "r1\tn1\tHELPFUL\n");
        CHECK_THROWS_AS(read_ratings_tsv(short_row, "x"), ParseError);
    }
    SECTION("missing file names the path") {
        CHECK_THROWS_WITH(load_ratings_tsv("/nonexistent/ratings.tsv"), ContainsSubstring("/nonexistent/ratings.tsv"));
    }
}

TEST_CASE("notes TSV round trip") {
    const std::string text =
        "note_id\tpost_id\tlanguage\tclassification\tdisclosed_status\tcited_domains\n"
        "n1\tp1\tja\tMISINFORMED_OR_POTENTIALLY_MISLEADING\tHELPFUL\tnhk.or.jp|x.com\n"
        "n2\t\t\tNOT_MISLEADING\t\t\n";
    std::istringstream in(text);
    auto notes = read_notes_tsv(in, "mem");
    REQUIRE(notes.size() == 2);
    CHECK(notes[0].language == "ja");
    CHECK(notes[0].cited_domains == std::vector<std::string>{"nhk.or.jp", "x.com"});
    CHECK(notes[0].disclosed_status == NoteStatus::Helpful);
    CHECK(notes[1].classification == NoteClassification::NoteNotNeeded);
    CHECK_FALSE(notes[1].post_id.has_value());
    std::ostringstream out;
    write_notes_tsv(out, notes);
    CHECK(out.str() == text);
}

TEST_CASE("domain normalization and aliases") {
    CHECK(normalize_domain("https://www.Example.COM:8080/path?q=1#f") == "example.com");
    CHECK(normalize_domain("http://user@news.bbc.co.uk/x") == "news.bbc.co.uk");
    CHECK(normalize_domain("example.org") == "example.org");
    CHECK(normalize_domain("https:///") == "");

    DomainAliases aliases(std::map<std::string, std::string>{{"twitter.com", "x.com"}});
    CHECK(aliases.canonical("twitter.com") == "x.com");
    CHECK(aliases.canonical("mobile.twitter.com") == "x.com");
    CHECK(aliases.canonical("nottwitter.com") == "nottwitter.com");

    CHECK(domain_matches("help.x.com", "x.com"));
    CHECK(domain_matches("x.com", "x.com"));
    CHECK_FALSE(domain_matches("xx.com", "x.com"));

    auto hosts = extract_cited_domains(
        "See https://twitter.com/a/status/1 and http://www.reuters.com/fact, again https://reuters.com/x.", aliases);
    CHECK(hosts == std::vector<std::string>{"x.com", "reuters.com"});
}

TEST_CASE("dump adapter maps public dump columns") {
    testing::TempDir dir;
    testing::write_file(dir.file("ratings_dump.tsv"),
                        "noteId\traterParticipantId\tcreatedAtMillis\thelpfulnessLevel\textra\n"
                        "111\tAAA\t1700000000000\tHELPFUL\tz\n"
                        "111\tBBB\t1700000000001\tSOMEWHAT_HELPFUL\tz\n"
                        "222\tAAA\t1700000000002\t\tz\n");
    testing::write_file(dir.file("ratings_map.json"), R"({
        "kind": "ratings",
        "columns": {"rater_id": "raterParticipantId", "note_id": "noteId",
                    "rating": "helpfulnessLevel", "created_at_ms": "createdAtMillis"},
        "values": {"rating": {"HELPFUL": "HELPFUL", "SOMEWHAT_HELPFUL": "SOMEWHAT_HELPFUL",
                              "NOT_HELPFUL": "NOT_HELPFUL"}},
        "skip_unmapped": true})");
    AdapterStats stats;
    auto ds = adapt_ratings_dump(dir.file("ratings_dump.tsv"), DumpMapping::load_json(dir.file("ratings_map.json")),
                                 &stats);
    CHECK(stats.rows_read == 3);
    CHECK(stats.rows_skipped == 1);
    REQUIRE(ds.size() == 2);
    CHECK(ds.triples()[0].rater_id == "AAA");
    CHECK(ds.triples()[1].created_at_ms == 1700000000001);

    testing::write_file(dir.file("notes_dump.tsv"),
                        "noteId\ttweetId\tclassification\tsummary\n"
                        "111\t9\tMISINFORMED_OR_POTENTIALLY_MISLEADING\tsee https://mobile.twitter.com/x\n"
                        "222\t8\tNOT_MISLEADING\tno links\n");
    testing::write_file(dir.file("notes_map.json"), R"({
        "kind": "notes",
        "columns": {"note_id": "noteId", "post_id": "tweetId", "classification": "classification"},
        "urls_from": "summary"})");
    auto notes = adapt_notes_dump(dir.file("notes_dump.tsv"), DumpMapping::load_json(dir.file("notes_map.json")),
                                  DomainAliases(std::map<std::string, std::string>{{"twitter.com", "x.com"}}));
    REQUIRE(notes.size() == 2);
    CHECK(notes[0].post_id == "9");
    CHECK(notes[0].cited_domains == std::vector<std::string>{"x.com"});
    CHECK(notes[1].classification == NoteClassification::NoteNotNeeded);
}
