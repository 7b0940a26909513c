#include "exactlift/rng.hpp"

namespace xl {

namespace {

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

uint64_t fnv1a(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

Rng::Rng(uint64_t seed) : seed_(seed), eng_(splitmix64(seed)) {}

Rng Rng::split(std::string_view label) const { return Rng(splitmix64(seed_ ^ fnv1a(label))); }

Rng Rng::split(uint64_t index) const { return Rng(splitmix64(seed_ + 0x632be59bd9b4e019ULL * (index + 1))); }

Poly random_poly(Field f, Rng& rng, int max_degree, long coeff_bound, int max_terms) {
    Coeffs K = f.coeffs();
    int n = f.nvars();
    std::vector<Term> ts;
    int count = int(rng.range(1, max_terms));
    for (int t = 0; t < count; ++t) {
        Monomial m;
        int budget = int(rng.range(0, max_degree));
        for (int k = 0; k < budget && n > 0; ++k) m.e[rng.below(n)]++;
        mpq_class c(rng.range(-coeff_bound, coeff_bound));
        K.reduce(c);
        ts.push_back({m, c});
    }
    return Poly::from_terms(std::move(ts), K);
}

FieldElement random_element(Field f, Rng& rng, int max_degree, long coeff_bound) {
    if (!f.is_function_field()) {
        if (f.is_finite()) return f.from_int(long(rng.below(f.characteristic())));
        mpq_class q(rng.range(-coeff_bound, coeff_bound), rng.range(1, coeff_bound));
        q.canonicalize();
        return f.from_rational(q);
    }
    Poly num = random_poly(f, rng, max_degree, coeff_bound);
    Poly den;
    while (den.is_zero()) den = random_poly(f, rng, max_degree, coeff_bound);
    return FieldElement::canonicalize(f, num, den);
}

FieldElement random_nonzero(Field f, Rng& rng, int max_degree, long coeff_bound) {
    for (;;) {
        FieldElement e = random_element(f, rng, max_degree, coeff_bound);
        if (!e.is_zero()) return e;
    }
}

}  // namespace xl
