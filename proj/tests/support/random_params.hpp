#pragma once

#include <random>

#include "hardyp/params.hpp"

namespace hardyp::testing {

// valid tuples over the full assumption range, seeded for reproducibility
class ParamSampler {
public:
    explicit ParamSampler(unsigned seed) : rng_(seed) {}

    Params next(double mu_lo = -3.0, double mu_hi_frac = 0.9) {
        std::uniform_int_distribution<int> dim(3, 8);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        Params P;
        P.N = dim(rng_);
        P.p = 1.3 + uni(rng_) * (std::fmin(3.5, P.N - 0.5) - 1.3);
        P.mu = mu_lo + uni(rng_) * (mu_hi_frac * P.mu_bar() - mu_lo);
        P.s = 0.9 * P.p * uni(rng_);
        return P;
    }

    double uniform(double a, double b) {
        std::uniform_real_distribution<double> uni(a, b);
        return uni(rng_);
    }

    std::mt19937& rng() { return rng_; }

private:
    std::mt19937 rng_;
};

} // namespace hardyp::testing
