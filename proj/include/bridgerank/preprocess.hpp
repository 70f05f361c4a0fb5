#pragma once

#include <cstddef>
#include <string>
#include <unordered_set>

#include "bridgerank/dataset.hpp"

namespace bridgerank {

struct PreprocessOptions {
    std::size_t min_ratings_per_note = 5;
    std::size_t min_notes_per_rater = 10;
    // Notes removed before counting (e.g. NoteNotNeeded notes).
    std::unordered_set<std::string> note_filter;
    // Repeat the two passes until nothing changes. Off by default.
    bool iterate_to_fixpoint = false;
};

// Notes pass first (counts taken on the input), then the raters pass on what
// survives. A surviving note may therefore hold fewer than
// min_ratings_per_note ratings afterwards unless iterate_to_fixpoint is set.
RatingsDataset preprocess(const RatingsDataset& dataset, const PreprocessOptions& options = {});

}  // namespace bridgerank
