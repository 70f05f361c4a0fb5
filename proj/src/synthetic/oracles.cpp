#include <vector>

#include "bridgerank/error.hpp"
#include "bridgerank/synthetic.hpp"

namespace bridgerank {

std::vector<double> oracle_finite_difference(const std::function<double(std::span<const double>)>& f,
                                             std::span<const double> x, double h) {
    if (!(h > 0)) throw ValidationError("finite-difference step must be positive");
    std::vector<double> point(x.begin(), x.end());
    std::vector<double> grad(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double saved = point[i];
        point[i] = saved + h;
        const double up = f(point);
        point[i] = saved - h;
        const double down = f(point);
        point[i] = saved;
        grad[i] = (up - down) / (2.0 * h);
    }
    return grad;
}

double oracle_pairwise_auc(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) throw ValidationError("scores and labels differ in length");
    double wins = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!labels[i]) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j]) continue;
            ++pairs;
            if (scores[i] > scores[j]) wins += 1.0;
            else if (scores[i] == scores[j]) wins += 0.5;
        }
    }
    if (pairs == 0) throw ValidationError("AUC needs both classes");
    return wins / static_cast<double>(pairs);
}

}  // namespace bridgerank
