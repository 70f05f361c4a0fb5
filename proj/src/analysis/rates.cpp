#include "bridgerank/analysis.hpp"
#include "bridgerank/error.hpp"

namespace bridgerank {

double deletion_adjusted_rate(double f, double d_h, double d_nh) {
    for (double v : {f, d_h, d_nh})
        if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("deletion-adjusted rate inputs must lie in [0, 1]");
    const double kept_helpful = f * (1.0 - d_h);
    const double denom = kept_helpful + (1.0 - f) * (1.0 - d_nh);
    if (denom == 0.0) throw ValidationError("deletion-adjusted rate undefined: every post deleted");
    return kept_helpful / denom;
}

}  // namespace bridgerank
