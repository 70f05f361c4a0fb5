#include <algorithm>
#include <numeric>

#include "bridgerank/analysis.hpp"
#include "bridgerank/error.hpp"

namespace bridgerank {

double auc_roc(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) throw ValidationError("scores and labels differ in length");
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Twice the Mann-Whitney U, kept integral so ties (worth 1/2) stay exact.
    std::uint64_t twice_u = 0, negatives_below = 0, positives = 0, negatives = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        std::uint64_t tie_pos = 0, tie_neg = 0;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) {
            if (labels[order[j]]) ++tie_pos;
            else ++tie_neg;
            ++j;
        }
        twice_u += tie_pos * (2 * negatives_below + tie_neg);
        negatives_below += tie_neg;
        positives += tie_pos;
        negatives += tie_neg;
        i = j;
    }
    if (positives == 0 || negatives == 0) throw ValidationError("AUC needs both classes");
    return (static_cast<double>(twice_u) / 2.0) / static_cast<double>(positives * negatives);
}

}  // namespace bridgerank
