#include "bridgerank/notes.hpp"
#include "bridgerank/rating.hpp"

namespace bridgerank {

std::optional<RatingValue> decode_rating(double value) noexcept {
    if (value == 1.0) return RatingValue::Helpful;
    if (value == 0.5) return RatingValue::SomewhatHelpful;
    if (value == 0.0) return RatingValue::NotHelpful;
    return std::nullopt;
}

std::string_view to_token(RatingValue v) noexcept {
    switch (v) {
        case RatingValue::Helpful: return "HELPFUL";
        case RatingValue::SomewhatHelpful: return "SOMEWHAT_HELPFUL";
        case RatingValue::NotHelpful: return "NOT_HELPFUL";
    }
    return "";
}

std::optional<RatingValue> rating_from_token(std::string_view token) noexcept {
    if (token == "HELPFUL") return RatingValue::Helpful;
    if (token == "SOMEWHAT_HELPFUL") return RatingValue::SomewhatHelpful;
    if (token == "NOT_HELPFUL") return RatingValue::NotHelpful;
    return std::nullopt;
}

std::string_view to_token(NoteClassification c) noexcept {
    return c == NoteClassification::MisinformedOrMisleading ? "MISINFORMED_OR_POTENTIALLY_MISLEADING"
                                                            : "NOT_MISLEADING";
}

std::optional<NoteClassification> classification_from_token(std::string_view s) noexcept {
    if (s == "MISINFORMED_OR_POTENTIALLY_MISLEADING") return NoteClassification::MisinformedOrMisleading;
    if (s == "NOT_MISLEADING") return NoteClassification::NoteNotNeeded;
    return std::nullopt;
}

std::string_view to_token(NoteStatus s) noexcept {
    switch (s) {
        case NoteStatus::Helpful: return "HELPFUL";
        case NoteStatus::NotHelpful: return "NOT_HELPFUL";
        case NoteStatus::NeedsMoreRatings: return "NEEDS_MORE_RATINGS";
    }
    return "";
}

std::optional<NoteStatus> status_from_token(std::string_view s) noexcept {
    if (s == "HELPFUL") return NoteStatus::Helpful;
    if (s == "NOT_HELPFUL") return NoteStatus::NotHelpful;
    if (s == "NEEDS_MORE_RATINGS") return NoteStatus::NeedsMoreRatings;
    return std::nullopt;
}

}  // namespace bridgerank
