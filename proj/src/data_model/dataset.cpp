#include "bridgerank/dataset.hpp"

#include "bridgerank/error.hpp"

namespace bridgerank {

namespace {

std::uint64_t pair_key(std::uint32_t r, std::uint32_t n) {
    return (static_cast<std::uint64_t>(r) << 32) | n;
}

}  // namespace

RatingsDataset RatingsDataset::from_triples(std::vector<RatingTriple> triples) {
    RatingsDataset ds;
    ds.rater_col_.reserve(triples.size());
    ds.note_col_.reserve(triples.size());
    ds.value_col_.reserve(triples.size());
    std::unordered_map<std::uint64_t, std::size_t> seen;
    seen.reserve(triples.size());

    for (std::size_t i = 0; i < triples.size(); ++i) {
        const auto& t = triples[i];
        auto [rit, rnew] = ds.rater_lookup_.try_emplace(t.rater_id,
                                                        static_cast<std::uint32_t>(ds.rater_ids_.size()));
        if (rnew) ds.rater_ids_.push_back(t.rater_id);
        auto [nit, nnew] = ds.note_lookup_.try_emplace(t.note_id,
                                                       static_cast<std::uint32_t>(ds.note_ids_.size()));
        if (nnew) ds.note_ids_.push_back(t.note_id);
        if (!seen.emplace(pair_key(rit->second, nit->second), i).second)
            throw ValidationError("duplicate rating for (rater " + t.rater_id + ", note " + t.note_id +
                                  ") at triple " + std::to_string(i));
        ds.rater_col_.push_back(rit->second);
        ds.note_col_.push_back(nit->second);
        ds.value_col_.push_back(encode_rating(t.value));
    }
    ds.triples_ = std::move(triples);
    return ds;
}

std::int64_t RatingsDataset::find_rater(const std::string& id) const {
    const auto it = rater_lookup_.find(id);
    return it == rater_lookup_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

std::int64_t RatingsDataset::find_note(const std::string& id) const {
    const auto it = note_lookup_.find(id);
    return it == note_lookup_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

std::vector<std::size_t> RatingsDataset::note_rating_counts() const {
    std::vector<std::size_t> counts(note_count(), 0);
    for (auto n : note_col_) ++counts[n];
    return counts;
}

std::vector<std::size_t> RatingsDataset::rater_rating_counts() const {
    std::vector<std::size_t> counts(rater_count(), 0);
    for (auto r : rater_col_) ++counts[r];
    return counts;
}

RatingsDataset RatingsDataset::subset(std::span<const std::size_t> rows) const {
    std::vector<RatingTriple> kept;
    kept.reserve(rows.size());
    for (auto i : rows) kept.push_back(triples_.at(i));
    return from_triples(std::move(kept));
}

}  // namespace bridgerank
