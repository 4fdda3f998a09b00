#pragma once

#include <memory>
#include <vector>

#include "periodica/real.hpp"

namespace periodica {

// Gauss-Legendre rule on [-1, 1].  Rules are cached per (order, precision)
// behind a mutex; the returned object is immutable and shareable across
// threads.
struct LegendreRule {
    int order = 0;
    std::vector<Real> nodes;    // ascending
    std::vector<Real> weights;  // positive, sum to 2
};

std::shared_ptr<const LegendreRule> legendre_rule(int order, mpfr_prec_t prec);

}  // namespace periodica
