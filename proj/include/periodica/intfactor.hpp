#pragma once

#include <vector>

#include "periodica/qpoly.hpp"

namespace periodica {

// Irreducible monic factor of a rational polynomial together with its
// multiplicity.
struct QFactor {
    QPoly poly;
    int multiplicity = 1;
};

// Full factorization over Q (monic factors; the content is dropped).
// Factors are found by rounding products of subsets of high-precision complex
// roots and verifying each candidate by exact division.
std::vector<QFactor> factor_q(const QPoly& p);

}  // namespace periodica
