#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include <boost/math/distributions/chi_squared.hpp>

#include "bridgerank/analysis.hpp"
#include "bridgerank/error.hpp"

namespace bridgerank {

PermutationResult permutation_test(std::span<const double> a, std::span<const double> b, std::size_t permutations,
                                   std::uint64_t seed) {
    if (a.empty() || b.empty()) throw ValidationError("permutation test needs two non-empty groups");
    if (permutations == 0) throw ValidationError("permutation test needs at least one permutation");
    auto mean = [](auto first, auto last) {
        return std::accumulate(first, last, 0.0) / static_cast<double>(std::distance(first, last));
    };
    std::vector<double> pool(a.begin(), a.end());
    pool.insert(pool.end(), b.begin(), b.end());
    const auto split = static_cast<std::ptrdiff_t>(a.size());

    PermutationResult res;
    res.observed = mean(a.begin(), a.end()) - mean(b.begin(), b.end());
    res.permutations = permutations;
    const double threshold = std::abs(res.observed) * (1.0 - 1e-12);
    std::mt19937_64 rng(seed);
    std::size_t extreme = 0;
    for (std::size_t p = 0; p < permutations; ++p) {
        std::shuffle(pool.begin(), pool.end(), rng);
        const double diff = mean(pool.begin(), pool.begin() + split) - mean(pool.begin() + split, pool.end());
        if (std::abs(diff) >= threshold) ++extreme;
    }
    res.p_value = static_cast<double>(extreme + 1) / static_cast<double>(permutations + 1);
    return res;
}

std::vector<ChiSquareRow> chi_square_terms(const std::map<std::string, std::int64_t>& corpus_a,
                                           const std::map<std::string, std::int64_t>& corpus_b) {
    double total_a = 0, total_b = 0;
    for (const auto& [t, c] : corpus_a) total_a += static_cast<double>(c);
    for (const auto& [t, c] : corpus_b) total_b += static_cast<double>(c);
    if (total_a <= 0 || total_b <= 0) throw ValidationError("chi-square needs two non-empty corpora");

    std::set<std::string> terms;
    for (const auto& [t, c] : corpus_a) terms.insert(t);
    for (const auto& [t, c] : corpus_b) terms.insert(t);
    const boost::math::chi_squared dist(1.0);

    std::vector<ChiSquareRow> rows;
    for (const auto& term : terms) {
        ChiSquareRow row;
        row.term = term;
        if (auto it = corpus_a.find(term); it != corpus_a.end()) row.count_a = it->second;
        if (auto it = corpus_b.find(term); it != corpus_b.end()) row.count_b = it->second;
        const double a = static_cast<double>(row.count_a), b = total_a - a;
        const double c = static_cast<double>(row.count_b), d = total_b - c;
        const double n = a + b + c + d;
        const double denom = (a + b) * (c + d) * (a + c) * (b + d);
        row.chi2 = denom > 0 ? n * (a * d - b * c) * (a * d - b * c) / denom : 0.0;
        row.p_value = boost::math::cdf(boost::math::complement(dist, row.chi2));
        row.over_represented_in_a = a / total_a > c / total_b;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace bridgerank
