#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "bridgerank/dataset.hpp"
#include "bridgerank/notes.hpp"

namespace bridgerank {

struct CountryRule {
    std::set<std::string> languages;  // ISO-639-1
    std::set<std::string> tlds;       // without dot, e.g. "jp"
    std::set<std::string> outlets;    // national news domains
};

// Country name -> rule. A TLD may belong to at most one country.
struct CountryRules {
    std::map<std::string, CountryRule> countries;

    void validate() const;
    // {"Japan": {"languages": ["ja"], "tlds": ["jp"], "outlets": ["nhk.or.jp"]}, ...}
    static CountryRules load_json(const std::string& path);
    static CountryRules from_json_text(const std::string& text);
};

struct Attribution {
    std::string country;
    int stage = 0;  // 1, 2 or 3

    bool operator==(const Attribution&) const = default;
};

struct CountryAssignment {
    std::map<std::string, Attribution> note_country;
    std::map<std::string, Attribution> rater_country;
    std::size_t iterations = 0;  // stage-3 rounds run
    bool converged = true;
};

// Stage 1: language in the country's languages and some cited domain is one
// of its outlets or under one of its TLDs. Zero or several matching
// countries leave the note unassigned.
std::map<std::string, Attribution> stage1_label_notes(const std::vector<NoteMeta>& notes,
                                                      const CountryRules& rules);

// Stage 2: raters who rated >= min_labeled_rated stage-1 notes go to the
// country they rated most; ties stay unassigned.
std::map<std::string, Attribution> stage2_assign_raters(
    const RatingsDataset& dataset, const std::map<std::string, Attribution>& note_country,
    std::size_t min_labeled_rated = 5);

// Stage 3: alternate (notes first) until nothing changes or max_iters rounds.
// Unassigned notes take the strict plurality country of their assigned
// raters; unassigned raters the strict plurality country of their assigned
// notes. Each half-round reads the state from before it. Earlier
// assignments are never changed.
CountryAssignment stage3_propagate(const RatingsDataset& dataset,
                                   std::map<std::string, Attribution> note_country,
                                   std::map<std::string, Attribution> rater_country,
                                   std::size_t max_iters = 20);

CountryAssignment segment_countries(const RatingsDataset& dataset, const std::vector<NoteMeta>& notes,
                                    const CountryRules& rules, std::size_t min_labeled_rated = 5,
                                    std::size_t max_iters = 20);

// Columns: entity_type (note|rater), id, country, stage. Sorted by type, id.
void write_assignment_tsv(const std::string& path, const CountryAssignment& a);

}  // namespace bridgerank
