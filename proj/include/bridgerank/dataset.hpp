#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "bridgerank/rating.hpp"

namespace bridgerank {

// Sparse (rater, note, value) corpus with dense index maps.
//
// Indices are assigned in order of first appearance in the triple list, so
// two datasets built from the same triples in the same order are identical.
// Immutable after construction.
class RatingsDataset {
public:
    RatingsDataset() = default;

    // Throws ValidationError on a duplicate (rater_id, note_id) pair.
    static RatingsDataset from_triples(std::vector<RatingTriple> triples);

    std::size_t size() const noexcept { return triples_.size(); }
    bool empty() const noexcept { return triples_.empty(); }
    std::size_t rater_count() const noexcept { return rater_ids_.size(); }
    std::size_t note_count() const noexcept { return note_ids_.size(); }

    const std::vector<RatingTriple>& triples() const noexcept { return triples_; }
    const std::vector<std::string>& rater_ids() const noexcept { return rater_ids_; }
    const std::vector<std::string>& note_ids() const noexcept { return note_ids_; }

    // Dense columns, parallel to triples().
    std::span<const std::uint32_t> rater_index() const noexcept { return rater_col_; }
    std::span<const std::uint32_t> note_index() const noexcept { return note_col_; }
    std::span<const double> values() const noexcept { return value_col_; }

    // Returns -1 when the id is unknown.
    std::int64_t find_rater(const std::string& id) const;
    std::int64_t find_note(const std::string& id) const;

    // Ratings per note / per rater, indexed densely.
    std::vector<std::size_t> note_rating_counts() const;
    std::vector<std::size_t> rater_rating_counts() const;

    // Dataset restricted to the listed rows (in the given order).
    RatingsDataset subset(std::span<const std::size_t> rows) const;

private:
    std::vector<RatingTriple> triples_;
    std::vector<std::string> rater_ids_;
    std::vector<std::string> note_ids_;
    std::unordered_map<std::string, std::uint32_t> rater_lookup_;
    std::unordered_map<std::string, std::uint32_t> note_lookup_;
    std::vector<std::uint32_t> rater_col_;
    std::vector<std::uint32_t> note_col_;
    std::vector<double> value_col_;
};

}  // namespace bridgerank
