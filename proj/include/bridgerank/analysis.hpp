#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bridgerank/domain.hpp"
#include "bridgerank/notes.hpp"

namespace bridgerank {

// ---------------------------------------------------------------- AUC

// Tie-aware Mann-Whitney AUC; labels are 0/1 (nonzero counts as positive).
// Throws ValidationError when a class is absent or sizes differ.
double auc_roc(std::span<const double> scores, std::span<const int> labels);

// ---------------------------------------------------------------- correlation

double pearson(std::span<const double> x, std::span<const double> y);
double spearman(std::span<const double> x, std::span<const double> y);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// Fisher z interval: tanh(atanh(r) -/+ z_{(1+level)/2} / sqrt(n - 3)).
Interval fisher_ci(double r, std::size_t n, double level = 0.95);

// ---------------------------------------------------------------- direction

struct LogisticModel {
    double w1 = 0.0;
    double w2 = 0.0;
    double intercept = 0.0;

    double score(double x1, double x2) const noexcept { return w1 * x1 + w2 * x2 + intercept; }
};

struct LogisticOptions {
    double l2 = 1e-2;           // on weights, not the intercept; mean log-loss scale
    double tolerance = 1e-8;    // gradient infinity norm
    std::size_t max_iterations = 200000;
};

// Full-batch gradient descent on the L2-penalized mean log-loss.
LogisticModel fit_logistic_2d(std::span<const std::pair<double, double>> points,
                              std::span<const int> labels, const LogisticOptions& options = {});

struct DirectionFit {
    double w1 = 0.0;   // unit-length direction (w1, w2)
    double w2 = 0.0;
    double intercept = 0.0;  // scaled with the weights
    double auc_mean = 0.0;
    double auc_std = 0.0;    // sample standard deviation across folds
    std::size_t folds = 0;
    std::vector<double> fold_aucs;
    bool stratified = false;
};

// k-fold cross-validated logistic regression. Folds come from a seeded
// shuffle; if any test fold lacks a class the split is redone stratified.
DirectionFit fit_direction_2d(std::span<const std::pair<double, double>> points,
                              std::span<const int> labels, std::size_t folds = 10,
                              std::uint64_t seed = 0, const LogisticOptions& options = {});

// ---------------------------------------------------------------- bootstrap

struct BootstrapCI {
    double point = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    double level = 0.95;
    std::size_t replicates = 0;   // successful replicates
    std::size_t discarded = 0;    // replicates where the statistic failed
    std::vector<double> values;   // replicate values, replicate order
};

// Receives the resampled primary unit indices (with repeats).
using BootstrapStatistic = std::function<double(std::span<const std::size_t>)>;

struct BootstrapOptions {
    std::size_t replicates = 100;
    double level = 0.95;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

// Percentile bootstrap over n_units primary units. When `groups` is given
// (one secondary id per unit) the secondary ids are resampled too and a
// replicate keeps only units whose id was drawn at least once. Replicate i
// uses an RNG seeded from (seed, i), so results do not depend on threads.
// A statistic that throws or returns non-finite discards the replicate. The
// interval is widened to contain the point estimate if needed.
BootstrapCI bootstrap_ci(const BootstrapStatistic& stat, std::size_t n_units,
                         const BootstrapOptions& options = {},
                         std::optional<std::span<const std::size_t>> groups = std::nullopt);

// ---------------------------------------------------------------- rates

// Observed Helpful-Status share given a true share f and deletion
// probabilities of Helpful / non-Helpful posts:
//   f(1 - d_h) / (f(1 - d_h) + (1 - f)(1 - d_nh))
double deletion_adjusted_rate(double f_helpful, double d_helpful, double d_not_helpful);

// ---------------------------------------------------------------- sources

struct SourceCategory {
    std::string name;
    std::set<std::string> domains;
};

// Categories are checked in order; a domain counts for the first category
// that matches it. The platform category (if named) is further split into
// "<name>/internal" (hosts under internal_subdomains) and "<name>/content".
struct SourceCategories {
    std::vector<SourceCategory> categories;
    std::string platform_category;
    std::set<std::string> internal_subdomains;

    static SourceCategories load_json(const std::string& path);
};

struct SourceRow {
    std::string category;
    std::size_t notes = 0;
    double fraction = 0.0;
};

// Per-note membership (a note citing two news domains counts once);
// fractions are over all notes, including ones citing nothing.
std::vector<SourceRow> source_stats(const std::vector<NoteMeta>& notes,
                                    const SourceCategories& categories);

// ---------------------------------------------------------------- tests

struct PermutationResult {
    double observed = 0.0;   // mean(a) - mean(b)
    double p_value = 0.0;    // two-sided, (count + 1) / (permutations + 1)
    std::size_t permutations = 0;
};

PermutationResult permutation_test(std::span<const double> a, std::span<const double> b,
                                   std::size_t permutations = 10000, std::uint64_t seed = 0);

struct ChiSquareRow {
    std::string term;
    std::int64_t count_a = 0;
    std::int64_t count_b = 0;
    double chi2 = 0.0;
    double p_value = 0.0;
    bool over_represented_in_a = false;
};

// 2x2 Pearson chi-square per term (term vs all other terms, corpus a vs b).
std::vector<ChiSquareRow> chi_square_terms(const std::map<std::string, std::int64_t>& corpus_a,
                                           const std::map<std::string, std::int64_t>& corpus_b);

}  // namespace bridgerank
