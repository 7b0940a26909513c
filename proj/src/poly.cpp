#include "exactlift/poly.hpp"

#include <algorithm>
#include <optional>

#include "exactlift/error.hpp"

namespace xl {

bool deglex_greater(const Monomial& a, const Monomial& b) {
    unsigned da = a.degree(), db = b.degree();
    if (da != db) return da > db;
    for (int i = 0; i < kMaxVars; ++i)
        if (a.e[i] != b.e[i]) return a.e[i] > b.e[i];
    return false;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r;
    for (int i = 0; i < kMaxVars; ++i) {
        unsigned s = unsigned(a.e[i]) + b.e[i];
        if (s > 0xffff) throw Error(ErrorCode::InvalidArgument, "exponent overflow");
        r.e[i] = uint16_t(s);
    }
    return r;
}

Monomial operator/(const Monomial& a, const Monomial& b) {
    Monomial r;
    for (int i = 0; i < kMaxVars; ++i) r.e[i] = uint16_t(a.e[i] - b.e[i]);
    return r;
}

Monomial monomial_gcd(const Monomial& a, const Monomial& b) {
    Monomial r;
    for (int i = 0; i < kMaxVars; ++i) r.e[i] = std::min(a.e[i], b.e[i]);
    return r;
}

// ---- coefficients ----

void Coeffs::reduce(mpq_class& a) const {
    if (p == 0) return;
    mpz_class n = a.get_num(), d = a.get_den();
    mpz_fdiv_r_ui(n.get_mpz_t(), n.get_mpz_t(), p);
    if (d != 1) {
        mpz_fdiv_r_ui(d.get_mpz_t(), d.get_mpz_t(), p);
        if (d == 0) throw Error(ErrorCode::DivisionByZero, "denominator vanishes mod " + std::to_string(p));
        mpz_class m(p);
        mpz_invert(d.get_mpz_t(), d.get_mpz_t(), m.get_mpz_t());
        n *= d;
        mpz_fdiv_r_ui(n.get_mpz_t(), n.get_mpz_t(), p);
    }
    a = mpq_class(n);
}

mpq_class Coeffs::add(const mpq_class& a, const mpq_class& b) const {
    mpq_class r = a + b;
    if (p && r >= p) r -= p;
    return r;
}

mpq_class Coeffs::sub(const mpq_class& a, const mpq_class& b) const {
    mpq_class r = a - b;
    if (p && r < 0) r += p;
    return r;
}

mpq_class Coeffs::mul(const mpq_class& a, const mpq_class& b) const {
    if (p == 0) return a * b;
    mpz_class r = a.get_num() * b.get_num();
    mpz_fdiv_r_ui(r.get_mpz_t(), r.get_mpz_t(), p);
    return mpq_class(r);
}

mpq_class Coeffs::inv(const mpq_class& a) const {
    if (a == 0) throw Error(ErrorCode::DivisionByZero, "inverse of zero");
    if (p == 0) return 1 / a;
    mpz_class r, m(p);
    mpz_invert(r.get_mpz_t(), a.get_num_mpz_t(), m.get_mpz_t());
    return mpq_class(r);
}

mpq_class Coeffs::neg(const mpq_class& a) const {
    if (p == 0) return -a;
    return a == 0 ? mpq_class(0) : mpq_class(p - a);
}

// ---- polynomials ----

Poly Poly::constant(const mpq_class& c) {
    Poly r;
    if (c != 0) r.terms_.push_back({Monomial{}, c});
    return r;
}

Poly Poly::variable(int i) {
    Poly r;
    Monomial m;
    m.e[i] = 1;
    r.terms_.push_back({m, mpq_class(1)});
    return r;
}

bool Poly::is_one() const { return terms_.size() == 1 && terms_[0].m.is_one() && terms_[0].c == 1; }

int Poly::degree_in(int v) const {
    int d = -1;
    for (const auto& t : terms_) d = std::max(d, int(t.m.e[v]));
    return d;
}

bool Poly::uses_variable(int v) const {
    for (const auto& t : terms_)
        if (t.m.e[v]) return true;
    return false;
}

bool Poly::operator==(const Poly& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (size_t i = 0; i < terms_.size(); ++i)
        if (!(terms_[i].m == o.terms_[i].m) || terms_[i].c != o.terms_[i].c) return false;
    return true;
}

Poly Poly::from_terms(std::vector<Term> ts, const Coeffs& K) {
    std::sort(ts.begin(), ts.end(), [](const Term& a, const Term& b) { return deglex_greater(a.m, b.m); });
    Poly r;
    for (auto& t : ts) {
        if (!r.terms_.empty() && r.terms_.back().m == t.m) {
            r.terms_.back().c = K.add(r.terms_.back().c, t.c);
        } else {
            if (!r.terms_.empty() && r.terms_.back().c == 0) r.terms_.pop_back();
            r.terms_.push_back(std::move(t));
        }
    }
    if (!r.terms_.empty() && r.terms_.back().c == 0) r.terms_.pop_back();
    return r;
}

Poly add(const Poly& a, const Poly& b, const Coeffs& K) {
    Poly r;
    auto& out = r.terms_;
    out.reserve(a.terms_.size() + b.terms_.size());
    size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
        if (j == b.terms_.size() || (i < a.terms_.size() && deglex_greater(a.terms_[i].m, b.terms_[j].m))) {
            out.push_back(a.terms_[i++]);
        } else if (i == a.terms_.size() || deglex_greater(b.terms_[j].m, a.terms_[i].m)) {
            out.push_back(b.terms_[j++]);
        } else {
            mpq_class c = K.add(a.terms_[i].c, b.terms_[j].c);
            if (c != 0) out.push_back({a.terms_[i].m, c});
            ++i, ++j;
        }
    }
    return r;
}

Poly neg(const Poly& a, const Coeffs& K) {
    std::vector<Term> ts = a.terms();
    for (auto& t : ts) t.c = K.neg(t.c);
    return Poly::from_terms(std::move(ts), K);
}

Poly sub(const Poly& a, const Poly& b, const Coeffs& K) { return add(a, neg(b, K), K); }

Poly mul_term(const Poly& a, const Monomial& m, const mpq_class& c, const Coeffs& K) {
    std::vector<Term> ts;
    ts.reserve(a.terms().size());
    for (const auto& t : a.terms()) {
        mpq_class v = K.mul(t.c, c);
        if (v != 0) ts.push_back({t.m * m, v});
    }
    return Poly::from_terms(std::move(ts), K);
}

Poly scale(const Poly& a, const mpq_class& c, const Coeffs& K) { return mul_term(a, Monomial{}, c, K); }

Poly mul(const Poly& a, const Poly& b, const Coeffs& K) {
    if (a.is_zero() || b.is_zero()) return Poly();
    if (a.is_constant()) return scale(b, a.lead().c, K);
    if (b.is_constant()) return scale(a, b.lead().c, K);
    std::vector<Term> ts;
    ts.reserve(a.terms().size() * b.terms().size());
    for (const auto& s : a.terms())
        for (const auto& t : b.terms()) ts.push_back({s.m * t.m, K.mul(s.c, t.c)});
    return Poly::from_terms(std::move(ts), K);
}

Poly pow(const Poly& a, unsigned n, const Coeffs& K) {
    Poly r = Poly::constant(1), base = a;
    while (n) {
        if (n & 1) r = mul(r, base, K);
        n >>= 1;
        if (n) base = mul(base, base, K);
    }
    return r;
}

Poly exact_div(const Poly& a, const Poly& b, const Coeffs& K) {
    if (b.is_zero()) throw Error(ErrorCode::DivisionByZero, "polynomial division by zero");
    if (b.is_constant()) return scale(a, K.inv(b.lead().c), K);
    std::vector<Term> q;
    Poly r = a;
    const Term& lb = b.lead();
    mpq_class ilb = K.inv(lb.c);
    while (!r.is_zero()) {
        const Term& lr = r.lead();
        if (!lb.m.divides(lr.m)) throw Error(ErrorCode::Internal, "inexact polynomial division");
        Term t{lr.m / lb.m, K.mul(lr.c, ilb)};
        r = sub(r, mul_term(b, t.m, t.c, K), K);
        q.push_back(std::move(t));
    }
    return Poly::from_terms(std::move(q), K);
}

Poly monic(const Poly& a, const Coeffs& K) {
    if (a.is_zero() || a.lead().c == 1) return a;
    return scale(a, K.inv(a.lead().c), K);
}

namespace {

std::vector<Poly> coefficients_in(const Poly& f, int v, const Coeffs& K) {
    int d = f.degree_in(v);
    std::vector<std::vector<Term>> parts(std::max(d + 1, 0));
    for (const auto& t : f.terms()) {
        Term u = t;
        u.m.e[v] = 0;
        parts[t.m.e[v]].push_back(std::move(u));
    }
    std::vector<Poly> out;
    out.reserve(parts.size());
    for (auto& p : parts) out.push_back(Poly::from_terms(std::move(p), K));
    return out;
}

Poly leading_coefficient_in(const Poly& f, int v, const Coeffs& K) {
    int d = f.degree_in(v);
    std::vector<Term> ts;
    for (const auto& t : f.terms())
        if (t.m.e[v] == d) {
            Term u = t;
            u.m.e[v] = 0;
            ts.push_back(std::move(u));
        }
    return Poly::from_terms(std::move(ts), K);
}

Poly content_in(const Poly& f, int v, const Coeffs& K) {
    Poly g;
    for (const auto& c : coefficients_in(f, v, K)) {
        if (c.is_zero()) continue;
        g = gcd(g, c, K);
        if (g.is_constant()) return Poly::constant(1);
    }
    return g;
}

// Over Q: integer coefficients with content 1 and positive lead; over F_p:
// monic. Keeps pseudo-remainder sequences from growing rational noise.
Poly normalize_scalar(const Poly& f, const Coeffs& K) {
    if (f.is_zero()) return f;
    if (K.p) return monic(f, K);
    mpz_class den = 1, num = 0;
    for (const auto& t : f.terms()) {
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.c.get_den_mpz_t());
        mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), t.c.get_num_mpz_t());
    }
    mpq_class factor(den, num);
    if (f.lead().c < 0) factor = -factor;
    if (factor == 1) return f;
    return scale(f, factor, K);
}

Poly primitive_part_in(const Poly& f, int v, const Coeffs& K) {
    return normalize_scalar(exact_div(f, content_in(f, v, K), K), K);
}

// lc_v(g)^(deg f - deg g + 1) * f mod g, the exact power needed by the
// subresultant recurrence.
Poly pseudo_remainder(const Poly& f, const Poly& g, int v, const Coeffs& K) {
    int dg = g.degree_in(v);
    int steps = f.degree_in(v) - dg + 1;
    Poly lcg = leading_coefficient_in(g, v, K);
    Poly r = f;
    while (!r.is_zero() && r.degree_in(v) >= dg) {
        int dr = r.degree_in(v);
        Poly lcr = leading_coefficient_in(r, v, K);
        Monomial shift;
        shift.e[v] = uint16_t(dr - dg);
        Poly t = mul_term(mul(lcr, g, K), shift, mpq_class(1), K);
        r = sub(mul(lcg, r, K), t, K);
        --steps;
    }
    if (steps > 0 && !r.is_zero()) r = mul(pow(lcg, unsigned(steps), K), r, K);
    return r;
}

std::optional<Poly> try_div(const Poly& a, const Poly& b, const Coeffs& K) {
    for (int i = 0; i < kMaxVars; ++i)
        if (a.degree_in(i) < b.degree_in(i)) return std::nullopt;
    std::vector<Term> q;
    Poly r = a;
    const Term& lb = b.lead();
    mpq_class ilb = K.inv(lb.c);
    while (!r.is_zero()) {
        const Term& lr = r.lead();
        if (!lb.m.divides(lr.m)) return std::nullopt;
        Term t{lr.m / lb.m, K.mul(lr.c, ilb)};
        r = sub(r, mul_term(b, t.m, t.c, K), K);
        q.push_back(std::move(t));
    }
    return Poly::from_terms(std::move(q), K);
}

Poly monomial_content_gcd(const Monomial& m, const Poly& f) {
    Monomial g = m;
    for (const auto& t : f.terms()) g = monomial_gcd(g, t.m);
    return Poly::from_terms({{g, mpq_class(1)}}, Coeffs{});
}

// gcd of primitive polynomials in R[v], R = k[other variables], by the
// subresultant PRS; the result is primitive.
Poly primitive_gcd(Poly a, Poly b, int v, const Coeffs& K) {
    if (a.degree_in(v) < b.degree_in(v)) std::swap(a, b);
    Poly g = Poly::constant(1), h = Poly::constant(1);
    while (true) {
        if (b.degree_in(v) == 0) return Poly::constant(1);
        int delta = a.degree_in(v) - b.degree_in(v);
        Poly r = pseudo_remainder(a, b, v, K);
        if (r.is_zero()) return primitive_part_in(b, v, K);
        if (r.degree_in(v) == 0) return Poly::constant(1);
        a = std::move(b);
        b = exact_div(r, mul(g, pow(h, unsigned(delta), K), K), K);
        g = leading_coefficient_in(a, v, K);
        if (delta == 0) {
        } else if (delta == 1) {
            h = g;
        } else {
            h = exact_div(pow(g, unsigned(delta), K), pow(h, unsigned(delta - 1), K), K);
        }
    }
}

}  // namespace

Poly gcd(const Poly& a, const Poly& b, const Coeffs& K) {
    if (a.is_zero()) return monic(b, K);
    if (b.is_zero()) return monic(a, K);
    if (a.is_constant() || b.is_constant()) return Poly::constant(1);
    if (a.is_monomial()) return monomial_content_gcd(a.lead().m, b);
    if (b.is_monomial()) return monomial_content_gcd(b.lead().m, a);
    if (a == b) return monic(a, K);
    if (a.terms().size() >= b.terms().size()) {
        if (try_div(a, b, K)) return monic(b, K);
    } else if (try_div(b, a, K)) {
        return monic(a, K);
    }

    // main variable: one occurring in both with the smallest degree; a
    // variable occurring in only one of them reduces to a content gcd
    int v = -1, best = 1 << 30;
    for (int i = 0; i < kMaxVars; ++i) {
        int da = a.degree_in(i), db = b.degree_in(i);
        if (da <= 0 && db <= 0) continue;
        if (da <= 0 || db <= 0) {
            v = i;
            break;
        }
        if (std::max(da, db) < best) best = std::max(da, db), v = i;
    }

    Poly ca = content_in(a, v, K), cb = content_in(b, v, K);
    Poly c = gcd(ca, cb, K);
    Poly pa = normalize_scalar(exact_div(a, ca, K), K), pb = normalize_scalar(exact_div(b, cb, K), K);
    return monic(mul(c, primitive_gcd(pa, pb, v, K), K), K);
}

mpq_class evaluate(const Poly& a, const std::vector<mpq_class>& point, const Coeffs& K) {
    mpq_class s = 0;
    for (const auto& t : a.terms()) {
        mpq_class v = t.c;
        for (size_t i = 0; i < point.size(); ++i)
            for (unsigned k = 0; k < t.m.e[i]; ++k) v = K.mul(v, point[i]);
        s = K.add(s, v);
    }
    return s;
}

namespace {

std::string coefficient_string(const mpq_class& c) { return c.get_str(); }

}  // namespace

std::string Poly::to_string(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& t : terms_) {
        mpq_class c = t.c;
        bool negative = c < 0;
        if (negative) c = -c;
        if (first) {
            if (negative) out += "-";
        } else {
            out += negative ? " - " : " + ";
        }
        first = false;
        std::string mono;
        for (size_t i = 0; i < names.size(); ++i) {
            if (!t.m.e[i]) continue;
            if (!mono.empty()) mono += "*";
            mono += names[i];
            if (t.m.e[i] > 1) mono += "^" + std::to_string(t.m.e[i]);
        }
        if (mono.empty()) {
            out += coefficient_string(c);
        } else if (c == 1) {
            out += mono;
        } else {
            out += coefficient_string(c) + "*" + mono;
        }
    }
    return out;
}

}  // namespace xl
