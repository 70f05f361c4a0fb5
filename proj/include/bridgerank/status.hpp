#pragma once

#include <map>
#include <string>
#include <vector>

#include "bridgerank/mf.hpp"
#include "bridgerank/notes.hpp"

namespace bridgerank {

struct StatusThresholds {
    double helpful_min_beta = 0.180;
    double not_helpful_max_beta = -0.159;

    // Throws ValidationError unless helpful_min_beta > not_helpful_max_beta.
    void validate() const;
};

// Inclusive toward the decisive statuses:
//   beta_n >= helpful_min_beta      -> Helpful
//   beta_n <= not_helpful_max_beta  -> NotHelpful
//   otherwise                       -> NeedsMoreRatings
NoteStatus assign_status(double beta_n, const StatusThresholds& t);

// Disclosed statuses keyed by dense note index.
using DisclosedStatuses = std::map<std::size_t, NoteStatus>;

// helpful_min_beta is the (1 - coverage) quantile of beta_n over disclosed
// Helpful notes, not_helpful_max_beta the coverage quantile over disclosed
// NotHelpful notes. Throws ValidationError if a class is missing or the two
// quantiles cross.
StatusThresholds derive_thresholds(const ModelParams& params, const DisclosedStatuses& disclosed,
                                   double coverage = 0.9);

struct StatusAuc {
    double helpful = 0.0;      // beta_n as score for Helpful vs rest
    double not_helpful = 0.0;  // -beta_n as score for NotHelpful vs rest
};

// Throws ValidationError if either one-vs-rest problem has a single class.
StatusAuc status_auc(const ModelParams& params, const DisclosedStatuses& disclosed);

}  // namespace bridgerank
