#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace bridgerank {

enum class RatingValue : std::uint8_t { Helpful, SomewhatHelpful, NotHelpful };

// Helpful -> 1.0, SomewhatHelpful -> 0.5, NotHelpful -> 0.0.
constexpr double encode_rating(RatingValue v) noexcept {
    switch (v) {
        case RatingValue::Helpful: return 1.0;
        case RatingValue::SomewhatHelpful: return 0.5;
        case RatingValue::NotHelpful: return 0.0;
    }
    return 0.0;
}

// Inverse of encode_rating on {0, 0.5, 1}; nullopt for any other value.
std::optional<RatingValue> decode_rating(double value) noexcept;

// Canonical TSV tokens: HELPFUL, SOMEWHAT_HELPFUL, NOT_HELPFUL.
std::string_view to_token(RatingValue v) noexcept;
std::optional<RatingValue> rating_from_token(std::string_view token) noexcept;

struct RatingTriple {
    std::string rater_id;
    std::string note_id;
    RatingValue value = RatingValue::NotHelpful;
    std::optional<std::int64_t> created_at_ms;

    bool operator==(const RatingTriple&) const = default;
};

}  // namespace bridgerank
