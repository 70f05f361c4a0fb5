#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bridgerank {

enum class NoteClassification { MisinformedOrMisleading, NoteNotNeeded };

// Status as disclosed by the platform, and as resolved by status_resolver.
enum class NoteStatus { Helpful, NotHelpful, NeedsMoreRatings };

struct NoteMeta {
    std::string note_id;
    std::optional<std::string> post_id;
    std::optional<std::string> language;  // ISO-639-1
    std::vector<std::string> cited_domains;  // normalized hostnames
    NoteClassification classification = NoteClassification::MisinformedOrMisleading;
    std::optional<NoteStatus> disclosed_status;

    bool operator==(const NoteMeta&) const = default;
};

// TSV tokens: MISINFORMED_OR_POTENTIALLY_MISLEADING / NOT_MISLEADING and
// HELPFUL / NOT_HELPFUL / NEEDS_MORE_RATINGS.
std::string_view to_token(NoteClassification c) noexcept;
std::optional<NoteClassification> classification_from_token(std::string_view s) noexcept;
std::string_view to_token(NoteStatus s) noexcept;
std::optional<NoteStatus> status_from_token(std::string_view s) noexcept;

}  // namespace bridgerank
