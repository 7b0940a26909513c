#pragma once

// Sparse multivariate polynomials over Q or F_p, kept in graded lexicographic
// order (variable 0 is the largest). Coefficients are stored as mpq_class; for
// F_p they are integers in [0, p).

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace xl {

inline constexpr int kMaxVars = 8;

struct Monomial {
    std::array<uint16_t, kMaxVars> e{};

    unsigned degree() const {
        unsigned d = 0;
        for (auto x : e) d += x;
        return d;
    }
    bool divides(const Monomial& o) const {
        for (int i = 0; i < kMaxVars; ++i)
            if (e[i] > o.e[i]) return false;
        return true;
    }
    bool is_one() const { return degree() == 0; }
    bool operator==(const Monomial&) const = default;
};

// true when a > b in deglex
bool deglex_greater(const Monomial& a, const Monomial& b);
Monomial operator*(const Monomial& a, const Monomial& b);
Monomial operator/(const Monomial& a, const Monomial& b);  // requires b | a
Monomial monomial_gcd(const Monomial& a, const Monomial& b);

struct Term {
    Monomial m;
    mpq_class c;
};

// Coefficient domain: p == 0 means Q.
struct Coeffs {
    unsigned long p = 0;

    void reduce(mpq_class& a) const;
    mpq_class add(const mpq_class& a, const mpq_class& b) const;
    mpq_class sub(const mpq_class& a, const mpq_class& b) const;
    mpq_class mul(const mpq_class& a, const mpq_class& b) const;
    mpq_class inv(const mpq_class& a) const;
    mpq_class neg(const mpq_class& a) const;
    bool operator==(const Coeffs&) const = default;
};

class Poly {
public:
    Poly() = default;
    static Poly constant(const mpq_class& c);
    static Poly variable(int i);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].m.is_one()); }
    bool is_one() const;
    bool is_monomial() const { return terms_.size() == 1; }
    const Term& lead() const { return terms_.front(); }
    const std::vector<Term>& terms() const { return terms_; }
    int degree_in(int v) const;
    unsigned total_degree() const { return terms_.empty() ? 0 : terms_.front().m.degree(); }
    bool uses_variable(int v) const;

    bool operator==(const Poly&) const;

    // builds from arbitrary terms: sorts, merges, drops zeros
    static Poly from_terms(std::vector<Term> ts, const Coeffs& K);

    std::string to_string(const std::vector<std::string>& names) const;

private:
    std::vector<Term> terms_;  // strictly decreasing deglex, nonzero coefficients
    friend Poly add(const Poly&, const Poly&, const Coeffs&);
    friend Poly sub(const Poly&, const Poly&, const Coeffs&);
};

Poly add(const Poly& a, const Poly& b, const Coeffs& K);
Poly sub(const Poly& a, const Poly& b, const Coeffs& K);
Poly neg(const Poly& a, const Coeffs& K);
Poly mul(const Poly& a, const Poly& b, const Coeffs& K);
Poly scale(const Poly& a, const mpq_class& c, const Coeffs& K);
Poly mul_term(const Poly& a, const Monomial& m, const mpq_class& c, const Coeffs& K);
Poly pow(const Poly& a, unsigned n, const Coeffs& K);
// Exact quotient; throws Internal if b does not divide a.
Poly exact_div(const Poly& a, const Poly& b, const Coeffs& K);
// Lead coefficient 1 (zero stays zero).
Poly monic(const Poly& a, const Coeffs& K);
// Monic gcd; gcd(0, 0) = 0.
Poly gcd(const Poly& a, const Poly& b, const Coeffs& K);
mpq_class evaluate(const Poly& a, const std::vector<mpq_class>& point, const Coeffs& K);

}  // namespace xl
