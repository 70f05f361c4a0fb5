#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "bridgerank/analysis.hpp"
#include "bridgerank/error.hpp"
#include "bridgerank/util/parallel.hpp"
#include "bridgerank/util/quantile.hpp"

namespace bridgerank {

BootstrapCI bootstrap_ci(const BootstrapStatistic& stat, std::size_t n_units, const BootstrapOptions& opt,
                         std::optional<std::span<const std::size_t>> groups) {
    if (n_units == 0) throw ValidationError("bootstrap needs at least one unit");
    if (!(opt.level > 0 && opt.level < 1)) throw ValidationError("confidence level must be in (0, 1)");
    if (opt.replicates == 0) throw ValidationError("bootstrap needs at least one replicate");
    if (groups && groups->size() != n_units) throw ValidationError("one secondary group id per unit required");

    std::vector<std::size_t> group_ids;
    if (groups) {
        group_ids.assign(groups->begin(), groups->end());
        std::sort(group_ids.begin(), group_ids.end());
        group_ids.erase(std::unique(group_ids.begin(), group_ids.end()), group_ids.end());
    }

    std::vector<std::size_t> all(n_units);
    for (std::size_t i = 0; i < n_units; ++i) all[i] = i;

    BootstrapCI ci;
    ci.level = opt.level;
    ci.point = stat(all);

    std::vector<double> values(opt.replicates, std::nan(""));
    auto replicate = [&](std::size_t rep) {
        std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                          static_cast<std::uint32_t>(rep), static_cast<std::uint32_t>(rep >> 32)};
        std::mt19937_64 rng(seq);
        std::uniform_int_distribution<std::size_t> unit(0, n_units - 1);
        std::vector<std::size_t> sample(n_units);
        for (auto& s : sample) s = unit(rng);
        if (groups) {
            std::uniform_int_distribution<std::size_t> pick(0, group_ids.size() - 1);
            std::vector<bool> kept(group_ids.size(), false);
            for (std::size_t k = 0; k < group_ids.size(); ++k) kept[pick(rng)] = true;
            std::erase_if(sample, [&](std::size_t i) {
                const auto pos = std::lower_bound(group_ids.begin(), group_ids.end(), (*groups)[i]) - group_ids.begin();
                return !kept[static_cast<std::size_t>(pos)];
            });
        }
        try {
            values[rep] = stat(sample);
        } catch (...) {
            values[rep] = std::nan("");
        }
    };

    const unsigned workers = std::max(1u, opt.threads);
    if (workers == 1) {
        for (std::size_t rep = 0; rep < opt.replicates; ++rep) replicate(rep);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                const auto [lo, hi] = util::stripe(opt.replicates, w, workers);
                for (std::size_t rep = lo; rep < hi; ++rep) replicate(rep);
            });
    }

    for (double v : values) {
        if (std::isfinite(v)) ci.values.push_back(v);
        else ++ci.discarded;
    }
    ci.replicates = ci.values.size();
    if (ci.values.empty()) throw ValidationError("every bootstrap replicate failed");
    std::vector<double> sorted = ci.values;
    std::sort(sorted.begin(), sorted.end());
    const double tail = (1.0 - opt.level) / 2.0;
    ci.lo = std::min(util::quantile_sorted(sorted, tail), ci.point);
    ci.hi = std::max(util::quantile_sorted(sorted, 1.0 - tail), ci.point);
    return ci;
}

}  // namespace bridgerank
