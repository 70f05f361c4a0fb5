#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bridgerank/dataset.hpp"
#include "bridgerank/notes.hpp"

namespace bridgerank {

// Ratings TSV: rater_id, note_id, rating, created_at_ms (may be empty).
RatingsDataset load_ratings_tsv(const std::string& path);
RatingsDataset read_ratings_tsv(std::istream& in, const std::string& source_name);
void write_ratings_tsv(const std::string& path, const RatingsDataset& dataset);
void write_ratings_tsv(std::ostream& out, const RatingsDataset& dataset);

// Notes TSV: note_id, post_id, language, classification, disclosed_status,
// cited_domains (pipe-separated).
std::vector<NoteMeta> load_notes_tsv(const std::string& path);
std::vector<NoteMeta> read_notes_tsv(std::istream& in, const std::string& source_name);
void write_notes_tsv(const std::string& path, const std::vector<NoteMeta>& notes);
void write_notes_tsv(std::ostream& out, const std::vector<NoteMeta>& notes);

}  // namespace bridgerank
