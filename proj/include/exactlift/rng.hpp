#pragma once

// Seeded, splittable randomness. A child stream depends only on the parent
// seed and its label, never on how much of the parent has been consumed.

#include <cstdint>
#include <random>
#include <string_view>

#include "exactlift/field.hpp"

namespace xl {

class Rng {
public:
    explicit Rng(uint64_t seed = 0);
    Rng split(std::string_view label) const;
    Rng split(uint64_t index) const;

    uint64_t seed() const { return seed_; }
    uint64_t next() { return eng_(); }
    uint64_t below(uint64_t n) { return n ? eng_() % n : 0; }
    long range(long lo, long hi) { return lo + long(below(uint64_t(hi - lo + 1))); }
    bool chance(unsigned num, unsigned den) { return below(den) < num; }

private:
    uint64_t seed_;
    std::mt19937_64 eng_;
};

// Small random scalars. Over a function field the element is a ratio of
// random polynomials of total degree <= max_degree (denominator nonzero).
FieldElement random_element(Field f, Rng& rng, int max_degree = 1, long coeff_bound = 5);
FieldElement random_nonzero(Field f, Rng& rng, int max_degree = 1, long coeff_bound = 5);
Poly random_poly(Field f, Rng& rng, int max_degree, long coeff_bound, int max_terms = 4);

}  // namespace xl
