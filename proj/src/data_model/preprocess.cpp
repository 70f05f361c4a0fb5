#include "bridgerank/preprocess.hpp"

#include "bridgerank/error.hpp"

namespace bridgerank {

namespace {

RatingsDataset one_pass(const RatingsDataset& ds, const PreprocessOptions& opt, bool apply_filter) {
    const auto& triples = ds.triples();
    const auto notes = ds.note_index();
    const auto raters = ds.rater_index();

    std::vector<bool> excluded(ds.note_count(), false);
    if (apply_filter) {
        for (std::size_t n = 0; n < ds.note_count(); ++n)
            excluded[n] = opt.note_filter.contains(ds.note_ids()[n]);
    }

    std::vector<std::size_t> note_counts(ds.note_count(), 0);
    for (std::size_t i = 0; i < triples.size(); ++i)
        if (!excluded[notes[i]]) ++note_counts[notes[i]];

    std::vector<bool> keep_row(triples.size(), false);
    std::vector<std::size_t> rater_counts(ds.rater_count(), 0);
    for (std::size_t i = 0; i < triples.size(); ++i) {
        if (excluded[notes[i]] || note_counts[notes[i]] < opt.min_ratings_per_note) continue;
        keep_row[i] = true;
        ++rater_counts[raters[i]];
    }

    std::vector<RatingTriple> kept;
    for (std::size_t i = 0; i < triples.size(); ++i)
        if (keep_row[i] && rater_counts[raters[i]] >= opt.min_notes_per_rater) kept.push_back(triples[i]);
    return RatingsDataset::from_triples(std::move(kept));
}

}  // namespace

RatingsDataset preprocess(const RatingsDataset& dataset, const PreprocessOptions& options) {
    if (options.min_ratings_per_note < 1 || options.min_notes_per_rater < 1)
        throw ValidationError("preprocess thresholds must be >= 1");
    RatingsDataset out = one_pass(dataset, options, true);
    if (!options.iterate_to_fixpoint) return out;
    while (true) {
        RatingsDataset next = one_pass(out, options, false);
        if (next.size() == out.size()) return out;
        out = std::move(next);
    }
}

}  // namespace bridgerank
