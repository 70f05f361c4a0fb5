#include "bridgerank/tsv_io.hpp"

#include <fstream>
#include <unordered_set>

#include "bridgerank/error.hpp"
#include "bridgerank/util/tsv.hpp"

namespace bridgerank {

namespace {

const std::vector<std::string> kRatingsHeader = {"rater_id", "note_id", "rating", "created_at_ms"};
const std::vector<std::string> kNotesHeader = {"note_id", "post_id", "language", "classification",
                                               "disclosed_status", "cited_domains"};

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open input file: " + path);
    return in;
}

std::optional<std::string> opt_field(std::string_view f) {
    if (f.empty()) return std::nullopt;
    return std::string(f);
}

}  // namespace

RatingsDataset read_ratings_tsv(std::istream& in, const std::string& source) {
    util::TsvReader reader(in, source);
    reader.expect_header(kRatingsHeader);
    std::vector<RatingTriple> triples;
    std::unordered_set<std::string> seen;
    std::vector<std::string_view> f;
    while (reader.next(f)) {
        if (f.size() != 4) reader.fail("expected 4 fields, got " + std::to_string(f.size()));
        if (f[0].empty() || f[1].empty()) reader.fail("empty rater_id or note_id");
        RatingTriple t;
        t.rater_id = f[0];
        t.note_id = f[1];
        const auto v = rating_from_token(f[2]);
        if (!v) reader.fail("unknown rating value \"" + std::string(f[2]) + "\"");
        t.value = *v;
        if (!f[3].empty()) {
            try {
                t.created_at_ms = util::parse_int(f[3]);
            } catch (const Error& e) {
                reader.fail(e.what());
            }
        }
        std::string key = t.rater_id;
        key.push_back('\t');
        key += t.note_id;
        if (!seen.insert(std::move(key)).second)
            reader.fail("duplicate (rater, note) pair (" + t.rater_id + ", " + t.note_id + ")");
        triples.push_back(std::move(t));
    }
    return RatingsDataset::from_triples(std::move(triples));
}

RatingsDataset load_ratings_tsv(const std::string& path) {
    auto in = open_input(path);
    return read_ratings_tsv(in, path);
}

void write_ratings_tsv(std::ostream& out, const RatingsDataset& dataset) {
    for (std::size_t i = 0; i < kRatingsHeader.size(); ++i) out << (i ? "\t" : "") << kRatingsHeader[i];
    out << '\n';
    for (const auto& t : dataset.triples()) {
        out << t.rater_id << '\t' << t.note_id << '\t' << to_token(t.value) << '\t';
        if (t.created_at_ms) out << *t.created_at_ms;
        out << '\n';
    }
}

void write_ratings_tsv(const std::string& path, const RatingsDataset& dataset) {
    auto out = util::open_output(path);
    write_ratings_tsv(out, dataset);
}

std::vector<NoteMeta> read_notes_tsv(std::istream& in, const std::string& source) {
    util::TsvReader reader(in, source);
    reader.expect_header(kNotesHeader);
    std::vector<NoteMeta> notes;
    std::unordered_set<std::string> seen;
    std::vector<std::string_view> f;
    while (reader.next(f)) {
        if (f.size() != 6) reader.fail("expected 6 fields, got " + std::to_string(f.size()));
        NoteMeta m;
        m.note_id = f[0];
        if (m.note_id.empty()) reader.fail("empty note_id");
        if (!seen.insert(m.note_id).second) reader.fail("duplicate note_id " + m.note_id);
        m.post_id = opt_field(f[1]);
        m.language = opt_field(f[2]);
        const auto c = classification_from_token(f[3]);
        if (!c) reader.fail("unknown classification value \"" + std::string(f[3]) + "\"");
        m.classification = *c;
        if (!f[4].empty()) {
            const auto s = status_from_token(f[4]);
            if (!s) reader.fail("unknown disclosed_status value \"" + std::string(f[4]) + "\"");
            m.disclosed_status = *s;
        }
        if (!f[5].empty()) {
            for (auto d : util::split(f[5], '|')) {
                if (d.empty()) reader.fail("empty domain in cited_domains");
                m.cited_domains.emplace_back(d);
            }
        }
        notes.push_back(std::move(m));
    }
    return notes;
}

std::vector<NoteMeta> load_notes_tsv(const std::string& path) {
    auto in = open_input(path);
    return read_notes_tsv(in, path);
}

void write_notes_tsv(std::ostream& out, const std::vector<NoteMeta>& notes) {
    for (std::size_t i = 0; i < kNotesHeader.size(); ++i) out << (i ? "\t" : "") << kNotesHeader[i];
    out << '\n';
    for (const auto& m : notes) {
        out << m.note_id << '\t' << m.post_id.value_or("") << '\t' << m.language.value_or("") << '\t'
            << to_token(m.classification) << '\t';
        if (m.disclosed_status) out << to_token(*m.disclosed_status);
        out << '\t';
        for (std::size_t i = 0; i < m.cited_domains.size(); ++i) out << (i ? "|" : "") << m.cited_domains[i];
        out << '\n';
    }
}

void write_notes_tsv(const std::string& path, const std::vector<NoteMeta>& notes) {
    auto out = util::open_output(path);
    write_notes_tsv(out, notes);
}

}  // namespace bridgerank
