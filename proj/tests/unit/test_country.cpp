#include "catch_amalgamated.hpp"

#include "bridgerank/country.hpp"
#include "bridgerank/error.hpp"
#include "bridgerank/synthetic.hpp"
#include "support.hpp"

using namespace bridgerank;

namespace {

CountryRules rules() {
    return CountryRules::from_json_text(R"({
        "Japan":  {"languages": ["ja"], "tlds": ["jp"], "outlets": ["nhk.or.jp"]},
        "France": {"languages": ["fr"], "tlds": ["fr"], "outlets": ["lemonde.fr"]},
        "Brazil": {"languages": ["pt"], "tlds": ["br"], "outlets": ["globo.com"]},
        "Canada": {"languages": ["en", "fr"], "tlds": ["ca"], "outlets": ["cbc.ca", "lemonde.fr"]}
    })");
}

NoteMeta note(const std::string& id, const std::string& lang, std::vector<std::string> domains) {
    NoteMeta m;
    m.note_id = id;
    m.language = lang;
    m.cited_domains = std::move(domains);
    return m;
}

RatingTriple rt(const std::string& r, const std::string& n) { return {r, n, RatingValue::Helpful, std::nullopt}; }

std::map<std::string, Attribution> labeled(std::initializer_list<std::pair<std::string, std::string>> xs, int stage) {
    std::map<std::string, Attribution> m;
    for (auto& [id, c] : xs) m[id] = {c, stage};
    return m;
}

}  // namespace

TEST_CASE("rules validation") {
    CHECK_NOTHROW(rules().validate());
    CHECK_THROWS_AS(CountryRules::from_json_text(R"({"A": {"tlds": ["x"]}, "B": {"tlds": ["x"]}})"),
                    ValidationError);
    CHECK_THROWS(CountryRules::from_json_text("[1, 2]"));
}

TEST_CASE("stage 1 labels notes by language and national sources") {
    auto r = rules();
    std::vector<NoteMeta> notes{
        note("jp", "ja", {"nhk.or.jp"}),
        note("jp_tld", "ja", {"x.com", "news.yahoo.co.jp"}),
        note("en_x", "en", {"x.com"}),
        note("wrong_lang", "en", {"nhk.or.jp"}),
        note("both", "fr", {"lemonde.fr"}),
        note("none", "pt", {}),
        note("br", "pt", {"g1.globo.com"}),
    };
    auto s1 = stage1_label_notes(notes, r);
    CHECK(s1.at("jp") == Attribution{"Japan", 1});
    CHECK(s1.at("jp_tld").country == "Japan");
    CHECK(s1.at("br").country == "Brazil");
    CHECK_FALSE(s1.contains("en_x"));
    CHECK_FALSE(s1.contains("wrong_lang"));
    CHECK_FALSE(s1.contains("both"));
    CHECK_FALSE(s1.contains("none"));

    std::vector<NoteMeta> reversed(notes.rbegin(), notes.rend());
    CHECK(stage1_label_notes(reversed, r) == s1);
}

TEST_CASE("stage 2 assigns raters by their labeled ratings") {
    std::vector<RatingTriple> t;
    std::map<std::string, Attribution> notes;
    for (int i = 0; i < 10; ++i) notes["j" + std::to_string(i)] = {"Japan", 1};
    for (int i = 0; i < 5; ++i) notes["u" + std::to_string(i)] = {"France", 1};
    for (int i = 0; i < 10; ++i) t.push_back(rt("clear", "j" + std::to_string(i)));
    for (int i = 0; i < 2; ++i) t.push_back(rt("clear", "u" + std::to_string(i)));
    for (int i = 0; i < 4; ++i) t.push_back(rt("few", "j" + std::to_string(i)));
    t.push_back(rt("few", "unlabeled"));
    for (int i = 0; i < 5; ++i) {
        t.push_back(rt("tie", "j" + std::to_string(i)));
        t.push_back(rt("tie", "u" + std::to_string(i)));
    }
    auto ds = RatingsDataset::from_triples(t);
    auto s2 = stage2_assign_raters(ds, notes);
    CHECK(s2.at("clear") == Attribution{"Japan", 2});
    CHECK_FALSE(s2.contains("few"));
    CHECK_FALSE(s2.contains("tie"));
    CHECK(stage2_assign_raters(ds, notes, 4).contains("few"));
}

TEST_CASE("stage 3 propagates by strict plurality") {
    std::vector<RatingTriple> t{
        rt("f1", "n_fr"), rt("f2", "n_fr"), rt("f3", "n_fr"),
        rt("f1", "n_tie"), rt("f2", "n_tie"), rt("b1", "n_tie"), rt("b2", "n_tie"),
        rt("b1", "n_br"), rt("new", "n_br"), rt("new", "n_fr"), rt("new", "n_br2"), rt("b2", "n_br2"),
    };
    auto ds = RatingsDataset::from_triples(t);
    auto raters = labeled({{"f1", "France"}, {"f2", "France"}, {"f3", "France"}, {"b1", "Brazil"}, {"b2", "Brazil"}}, 2);
    auto a = stage3_propagate(ds, {}, raters);
    CHECK(a.note_country.at("n_fr") == Attribution{"France", 3});
    CHECK_FALSE(a.note_country.contains("n_tie"));
    CHECK(a.note_country.at("n_br").country == "Brazil");
    // "new" sees one France and two Brazil notes after the first round.
    CHECK(a.rater_country.at("new") == Attribution{"Brazil", 3});
    CHECK(a.converged);
    for (auto& [id, at] : raters) CHECK(a.rater_country.at(id) == at);
}

TEST_CASE("stage 3 stops at max_iters") {
    // A chain n0 - r0 - n1 - r1 - n2 ... needs one round per link.
    std::vector<RatingTriple> t;
    for (int i = 0; i < 6; ++i) {
        t.push_back(rt("r" + std::to_string(i), "n" + std::to_string(i)));
        t.push_back(rt("r" + std::to_string(i), "n" + std::to_string(i + 1)));
    }
    auto ds = RatingsDataset::from_triples(t);
    auto seed = labeled({{"n0", "Japan"}}, 1);
    auto short_run = stage3_propagate(ds, seed, {}, 2);
    CHECK_FALSE(short_run.converged);
    CHECK(short_run.iterations == 2);
    auto full = stage3_propagate(ds, seed, {}, 20);
    CHECK(full.converged);
    CHECK(full.note_country.size() == 7);
    CHECK(full.rater_country.size() == 6);
    for (auto& [id, at] : short_run.note_country) CHECK(full.note_country.at(id) == at);
}

TEST_CASE("synthetic three-country world") {
    auto w = generate_country_world(CountryWorldSpec{});
    auto a = segment_countries(w.dataset, w.notes, w.rules);
    std::size_t right = 0, wrong = 0;
    for (auto& [id, truth] : w.note_truth) {
        auto it = a.note_country.find(id);
        if (it == a.note_country.end()) continue;
        (it->second.country == truth ? right : wrong)++;
    }
    CHECK(wrong == 0);
    CHECK(static_cast<double>(right) >= 0.95 * static_cast<double>(w.note_truth.size()));
    CHECK(a.iterations <= 20);
    for (auto& [id, at] : a.rater_country) CHECK(at.country == w.rater_truth.at(id));

    // Growth is monotone: fewer rounds never label more.
    auto s1 = stage1_label_notes(w.notes, w.rules);
    auto s2 = stage2_assign_raters(w.dataset, s1);
    std::size_t prev = 0;
    for (std::size_t k = 1; k <= 4; ++k) {
        auto partial = stage3_propagate(w.dataset, s1, s2, k);
        std::size_t n = partial.note_country.size() + partial.rater_country.size();
        CHECK(n >= prev);
        prev = n;
    }
}

TEST_CASE("assignment TSV is sorted by type then id") {
    CountryAssignment a;
    a.note_country = labeled({{"n2", "Japan"}, {"n1", "France"}}, 1);
    a.rater_country = labeled({{"r1", "Japan"}}, 2);
    testing::TempDir dir;
    write_assignment_tsv(dir.file("a.tsv"), a);
    CHECK(testing::read_file(dir.file("a.tsv")) ==
          "entity_type\tid\tcountry\tstage\nnote\tn1\tFrance\t1\nnote\tn2\tJapan\t1\nrater\tr1\tJapan\t2\n");
}
