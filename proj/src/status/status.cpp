#include "bridgerank/status.hpp"

#include "bridgerank/analysis.hpp"
#include "bridgerank/error.hpp"
#include "bridgerank/util/quantile.hpp"

namespace bridgerank {

void StatusThresholds::validate() const {
    if (!(helpful_min_beta > not_helpful_max_beta))
        throw ValidationError("status thresholds must satisfy helpful_min_beta > not_helpful_max_beta (got " +
                              std::to_string(helpful_min_beta) + " and " + std::to_string(not_helpful_max_beta) + ")");
}

NoteStatus assign_status(double beta_n, const StatusThresholds& t) {
    if (beta_n >= t.helpful_min_beta) return NoteStatus::Helpful;
    if (beta_n <= t.not_helpful_max_beta) return NoteStatus::NotHelpful;
    return NoteStatus::NeedsMoreRatings;
}

StatusThresholds derive_thresholds(const ModelParams& params, const DisclosedStatuses& disclosed, double coverage) {
    if (!(coverage > 0.0 && coverage < 1.0)) throw ValidationError("coverage must be in (0, 1)");
    std::vector<double> helpful, not_helpful;
    for (const auto& [note, status] : disclosed) {
        const double b = params.beta_n.at(note);
        if (status == NoteStatus::Helpful) helpful.push_back(b);
        if (status == NoteStatus::NotHelpful) not_helpful.push_back(b);
    }
    if (helpful.empty() || not_helpful.empty())
        throw ValidationError("deriving thresholds needs at least one disclosed Helpful and one NotHelpful note");
    StatusThresholds t;
    t.helpful_min_beta = util::quantile(helpful, 1.0 - coverage);
    t.not_helpful_max_beta = util::quantile(not_helpful, coverage);
    if (!(t.helpful_min_beta > t.not_helpful_max_beta))
        throw ValidationError("derived thresholds cross (helpful_min_beta " + std::to_string(t.helpful_min_beta) +
                              " <= not_helpful_max_beta " + std::to_string(t.not_helpful_max_beta) +
                              "); try a lower coverage");
    return t;
}

StatusAuc status_auc(const ModelParams& params, const DisclosedStatuses& disclosed) {
    std::vector<double> score, neg_score;
    std::vector<int> is_helpful, is_not_helpful;
    for (const auto& [note, status] : disclosed) {
        const double b = params.beta_n.at(note);
        score.push_back(b);
        neg_score.push_back(-b);
        is_helpful.push_back(status == NoteStatus::Helpful);
        is_not_helpful.push_back(status == NoteStatus::NotHelpful);
    }
    return {auc_roc(score, is_helpful), auc_roc(neg_score, is_not_helpful)};
}

}  // namespace bridgerank
