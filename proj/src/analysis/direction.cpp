#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "bridgerank/analysis.hpp"
#include "bridgerank/error.hpp"

namespace bridgerank {

namespace {

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

}  // namespace

LogisticModel fit_logistic_2d(std::span<const std::pair<double, double>> points, std::span<const int> labels,
                              const LogisticOptions& opt) {
    if (points.size() != labels.size()) throw ValidationError("points and labels differ in length");
    if (points.empty()) throw ValidationError("logistic regression on an empty sample");
    const double n = static_cast<double>(points.size());

    // Standardize so a single fixed step size works for any input scale.
    double mean[2] = {0, 0}, sd[2] = {0, 0};
    for (const auto& [a, b] : points) {
        mean[0] += a;
        mean[1] += b;
    }
    mean[0] /= n;
    mean[1] /= n;
    for (const auto& [a, b] : points) {
        sd[0] += (a - mean[0]) * (a - mean[0]);
        sd[1] += (b - mean[1]) * (b - mean[1]);
    }
    for (double& s : sd) {
        s = std::sqrt(s / n);
        if (s == 0) s = 1.0;
    }
    std::vector<double> x1(points.size()), x2(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        x1[i] = (points[i].first - mean[0]) / sd[0];
        x2[i] = (points[i].second - mean[1]) / sd[1];
    }

    // Mean log-loss Hessian is bounded by X^T X / (4n), whose trace is 3 here.
    const double step = 1.0 / (0.75 + opt.l2);
    double w1 = 0, w2 = 0, b = 0;
    for (std::size_t it = 0; it < opt.max_iterations; ++it) {
        double g1 = 0, g2 = 0, gb = 0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            const double resid = sigmoid(w1 * x1[i] + w2 * x2[i] + b) - (labels[i] ? 1.0 : 0.0);
            g1 += resid * x1[i];
            g2 += resid * x2[i];
            gb += resid;
        }
        g1 = g1 / n + opt.l2 * w1;
        g2 = g2 / n + opt.l2 * w2;
        gb /= n;
        if (std::max({std::abs(g1), std::abs(g2), std::abs(gb)}) < opt.tolerance) break;
        w1 -= step * g1;
        w2 -= step * g2;
        b -= step * gb;
    }
    LogisticModel m;
    m.w1 = w1 / sd[0];
    m.w2 = w2 / sd[1];
    m.intercept = b - m.w1 * mean[0] - m.w2 * mean[1];
    return m;
}

DirectionFit fit_direction_2d(std::span<const std::pair<double, double>> points, std::span<const int> labels,
                              std::size_t folds, std::uint64_t seed, const LogisticOptions& options) {
    if (folds < 2) throw ValidationError("direction fit needs at least 2 folds");
    if (points.size() != labels.size()) throw ValidationError("points and labels differ in length");
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] ? pos : neg).push_back(i);
    if (pos.size() < folds || neg.size() < folds)
        throw ValidationError("direction fit needs at least " + std::to_string(folds) + " points per class");

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> fold_of(points.size());
    std::vector<std::size_t> perm(points.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t k = 0; k < perm.size(); ++k) fold_of[perm[k]] = k % folds;

    auto fold_has_both = [&] {
        std::vector<int> mask(folds, 0);
        for (std::size_t i = 0; i < points.size(); ++i) mask[fold_of[i]] |= labels[i] ? 1 : 2;
        return std::all_of(mask.begin(), mask.end(), [](int m) { return m == 3; });
    };

    DirectionFit fit;
    fit.folds = folds;
    if (!fold_has_both()) {
        fit.stratified = true;
        std::shuffle(pos.begin(), pos.end(), rng);
        std::shuffle(neg.begin(), neg.end(), rng);
        for (std::size_t k = 0; k < pos.size(); ++k) fold_of[pos[k]] = k % folds;
        for (std::size_t k = 0; k < neg.size(); ++k) fold_of[neg[k]] = (pos.size() + k) % folds;
    }

    for (std::size_t f = 0; f < folds; ++f) {
        std::vector<std::pair<double, double>> train_x, test_x;
        std::vector<int> train_y, test_y;
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (fold_of[i] == f) {
                test_x.push_back(points[i]);
                test_y.push_back(labels[i] ? 1 : 0);
            } else {
                train_x.push_back(points[i]);
                train_y.push_back(labels[i] ? 1 : 0);
            }
        }
        const auto model = fit_logistic_2d(train_x, train_y, options);
        std::vector<double> scores;
        for (const auto& [a, b] : test_x) scores.push_back(model.score(a, b));
        fit.fold_aucs.push_back(auc_roc(scores, test_y));
    }
    const double k = static_cast<double>(folds);
    fit.auc_mean = std::accumulate(fit.fold_aucs.begin(), fit.fold_aucs.end(), 0.0) / k;
    double ss = 0;
    for (double a : fit.fold_aucs) ss += (a - fit.auc_mean) * (a - fit.auc_mean);
    fit.auc_std = std::sqrt(ss / (k - 1.0));

    std::vector<int> y(labels.begin(), labels.end());
    const auto full = fit_logistic_2d(points, y, options);
    const double norm = std::hypot(full.w1, full.w2);
    const double scale = norm > 0 ? 1.0 / norm : 1.0;
    fit.w1 = full.w1 * scale;
    fit.w2 = full.w2 * scale;
    fit.intercept = full.intercept * scale;
    return fit;
}

}  // namespace bridgerank
