#include "bridgerank/dump_adapter.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <unordered_set>

#include <json.hpp>

#include "bridgerank/error.hpp"
#include "bridgerank/util/tsv.hpp"

namespace bridgerank {

namespace {

// Resolves canonical column names to positions in the dump header.
class ColumnMap {
public:
    ColumnMap(const DumpMapping& mapping, const std::vector<std::string>& header,
              const util::TsvReader& reader)
        : mapping_(mapping) {
        for (const auto& [canon, source] : mapping.columns) {
            std::optional<std::size_t> pos;
            for (std::size_t i = 0; i < header.size(); ++i)
                if (header[i] == source) pos = i;
            if (!pos) reader.fail("mapped column \"" + source + "\" not in header");
            positions_[canon] = *pos;
        }
    }

    bool has(const std::string& canon) const { return positions_.contains(canon); }

    std::string_view raw(const std::vector<std::string_view>& row, const std::string& canon,
                         const util::TsvReader& reader) const {
        const auto pos = positions_.at(canon);
        if (pos >= row.size()) reader.fail("row too short for column " + canon);
        return row[pos];
    }

    // Applies the value table for `canon` when one is declared. nullopt means
    // the value is not in the table.
    std::optional<std::string> value(const std::vector<std::string_view>& row, const std::string& canon,
                                     const util::TsvReader& reader) const {
        std::string v(raw(row, canon, reader));
        const auto table = mapping_.values.find(canon);
        if (table == mapping_.values.end()) return v;
        const auto it = table->second.find(v);
        if (it == table->second.end()) return std::nullopt;
        return it->second;
    }

private:
    const DumpMapping& mapping_;
    std::map<std::string, std::size_t> positions_;
};

std::ifstream open_dump(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open input file: " + path);
    return in;
}

}  // namespace

DumpMapping DumpMapping::load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open mapping file: " + path);
    DumpMapping m;
    try {
        const auto j = nlohmann::json::parse(in);
        m.kind = j.at("kind").get<std::string>();
        m.columns = j.at("columns").get<std::map<std::string, std::string>>();
        if (j.contains("values"))
            m.values = j.at("values").get<std::map<std::string, std::map<std::string, std::string>>>();
        m.urls_from = j.value("urls_from", std::string{});
        m.skip_unmapped = j.value("skip_unmapped", false);
    } catch (const nlohmann::json::exception& e) {
        throw Error(path + ": invalid mapping: " + e.what());
    }
    if (m.kind != "ratings" && m.kind != "notes")
        throw ValidationError(path + ": kind must be \"ratings\" or \"notes\"");
    return m;
}

RatingsDataset adapt_ratings_dump(const std::string& path, const DumpMapping& mapping, AdapterStats* stats) {
    if (mapping.kind != "ratings") throw ValidationError("mapping kind is not \"ratings\"");
    for (const char* required : {"rater_id", "note_id", "rating"})
        if (!mapping.columns.contains(required))
            throw ValidationError(std::string("mapping lacks column ") + required);

    auto in = open_dump(path);
    util::TsvReader reader(in, path);
    const ColumnMap cols(mapping, reader.read_header(), reader);
    AdapterStats local;
    std::vector<RatingTriple> triples;
    std::unordered_set<std::string> seen;
    std::vector<std::string_view> row;
    while (reader.next(row)) {
        ++local.rows_read;
        const auto rating = cols.value(row, "rating", reader);
        std::optional<RatingValue> value;
        if (rating) value = rating_from_token(*rating);
        if (!value) {
            if (mapping.skip_unmapped) {
                ++local.rows_skipped;
                continue;
            }
            reader.fail("unknown rating value \"" + std::string(cols.raw(row, "rating", reader)) + "\"");
        }
        RatingTriple t;
        t.rater_id = cols.raw(row, "rater_id", reader);
        t.note_id = cols.raw(row, "note_id", reader);
        t.value = *value;
        if (cols.has("created_at_ms")) {
            const auto ts = cols.raw(row, "created_at_ms", reader);
            if (!ts.empty()) {
                try {
                    t.created_at_ms = util::parse_int(ts);
                } catch (const Error& e) {
                    reader.fail(e.what());
                }
            }
        }
        if (!seen.insert(t.rater_id + '\t' + t.note_id).second)
            reader.fail("duplicate (rater, note) pair (" + t.rater_id + ", " + t.note_id + ")");
        triples.push_back(std::move(t));
    }
    if (stats) *stats = local;
    return RatingsDataset::from_triples(std::move(triples));
}

std::vector<NoteMeta> adapt_notes_dump(const std::string& path, const DumpMapping& mapping,
                                       const DomainAliases& aliases, AdapterStats* stats) {
    if (mapping.kind != "notes") throw ValidationError("mapping kind is not \"notes\"");
    if (!mapping.columns.contains("note_id")) throw ValidationError("mapping lacks column note_id");

    auto in = open_dump(path);
    util::TsvReader reader(in, path);
    auto header = reader.read_header();
    DumpMapping effective = mapping;
    if (!mapping.urls_from.empty()) effective.columns["__urls"] = mapping.urls_from;
    const ColumnMap cols(effective, header, reader);

    AdapterStats local;
    std::vector<NoteMeta> notes;
    std::unordered_set<std::string> seen;
    std::vector<std::string_view> row;
    while (reader.next(row)) {
        ++local.rows_read;
        NoteMeta m;
        m.note_id = cols.raw(row, "note_id", reader);
        bool unmapped = false;
        auto optional_column = [&](const std::string& canon) -> std::optional<std::string> {
            if (!cols.has(canon)) return std::nullopt;
            auto v = cols.value(row, canon, reader);
            if (!v) {
                unmapped = true;
                return std::nullopt;
            }
            if (v->empty()) return std::nullopt;
            return v;
        };
        m.post_id = optional_column("post_id");
        m.language = optional_column("language");
        if (auto c = optional_column("classification")) {
            const auto cls = classification_from_token(*c);
            if (!cls) unmapped = true;
            else m.classification = *cls;
        }
        if (auto s = optional_column("disclosed_status")) {
            const auto st = status_from_token(*s);
            if (!st) unmapped = true;
            else m.disclosed_status = *st;
        }
        if (cols.has("cited_domains")) {
            for (auto d : util::split(cols.raw(row, "cited_domains", reader), '|')) {
                auto host = aliases.canonical(normalize_domain(d));
                if (!host.empty() && std::find(m.cited_domains.begin(), m.cited_domains.end(), host) ==
                                         m.cited_domains.end())
                    m.cited_domains.push_back(std::move(host));
            }
        }
        if (cols.has("__urls")) {
            for (auto& host : extract_cited_domains(cols.raw(row, "__urls", reader), aliases))
                if (std::find(m.cited_domains.begin(), m.cited_domains.end(), host) == m.cited_domains.end())
                    m.cited_domains.push_back(std::move(host));
        }
        if (unmapped) {
            if (mapping.skip_unmapped) {
                ++local.rows_skipped;
                continue;
            }
            reader.fail("value not covered by the mapping in note " + m.note_id);
        }
        if (!seen.insert(m.note_id).second) reader.fail("duplicate note_id " + m.note_id);
        notes.push_back(std::move(m));
    }
    if (stats) *stats = local;
    return notes;
}

}  // namespace bridgerank
