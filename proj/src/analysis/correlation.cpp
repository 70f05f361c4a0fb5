#include <algorithm>
#include <cmath>

#include <boost/math/distributions/normal.hpp>

#include "bridgerank/analysis.hpp"
#include "bridgerank/error.hpp"
#include "bridgerank/util/quantile.hpp"

namespace bridgerank {

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ValidationError("correlation inputs differ in length");
    if (x.size() < 3) throw ValidationError("correlation needs n >= 3");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0 || syy == 0) throw ValidationError("correlation undefined: zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ValidationError("correlation inputs differ in length");
    const auto rx = util::average_ranks(x);
    const auto ry = util::average_ranks(y);
    return pearson(rx, ry);
}

Interval fisher_ci(double r, std::size_t n, double level) {
    if (n < 4) throw ValidationError("Fisher interval needs n >= 4");
    if (!(r > -1 && r < 1)) throw ValidationError("Fisher interval needs |r| < 1");
    if (!(level > 0 && level < 1)) throw ValidationError("confidence level must be in (0, 1)");
    const double z = std::atanh(r);
    const double se = 1.0 / std::sqrt(static_cast<double>(n) - 3.0);
    const double crit = boost::math::quantile(boost::math::normal(), 0.5 + level / 2.0);
    return {std::tanh(z - crit * se), std::tanh(z + crit * se)};
}

}  // namespace bridgerank
