#include "doctest.h"

#include "exactlift/error.hpp"
#include "exactlift/field.hpp"
#include "exactlift/rng.hpp"

using namespace xl;

namespace {

Field kxy() { return Field::function_field(Field::rationals(), {"x", "y"}); }
Field kxyz() { return Field::function_field(Field::rationals(), {"x", "y", "z"}); }

// Dense univariate Euclid over Q, coefficient vectors low-to-high. Used as an
// independent check of the sparse recursive gcd.
using Dense = std::vector<mpq_class>;

void trim(Dense& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

Dense dense_rem(Dense a, const Dense& b) {
    trim(a);
    while (a.size() >= b.size()) {
        mpq_class f = a.back() / b.back();
        size_t shift = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i) a[i + shift] -= f * b[i];
        trim(a);
    }
    return a;
}

Dense dense_gcd(Dense a, Dense b) {
    trim(a), trim(b);
    while (!b.empty()) {
        Dense r = dense_rem(a, b);
        a = b;
        b = r;
    }
    for (auto& c : Dense(a)) (void)c;
    mpq_class l = a.back();
    for (auto& c : a) c /= l;
    return a;
}

Dense to_dense(const Poly& p) {
    Dense d;
    for (const auto& t : p.terms()) {
        size_t e = t.m.e[0];
        if (d.size() <= e) d.resize(e + 1, 0);
        d[e] = t.c;
    }
    return d;
}

}  // namespace

TEST_CASE("field descriptors") {
    CHECK(Field::parse("QQ") == Field::rationals());
    CHECK(Field::parse("GF(101)") == Field::prime(101));
    CHECK(Field::parse("QQ(x,y,z)") == kxyz());
    CHECK(Field::parse(" GF(7) ( s , t ) ").to_string() == "GF(7)(s,t)");
    CHECK_THROWS_AS(Field::prime(100), Error);
    CHECK_THROWS_AS(Field::function_field(Field::rationals(), {"x", "x"}), Error);
    CHECK_THROWS_AS(Field::function_field(kxy(), {"z"}), Error);
    CHECK_THROWS_AS(Field::parse("RR"), ParseError);
}

TEST_CASE("arithmetic examples") {
    Field L = kxy();
    auto e = [&](const char* s) { return L.parse_element(s); };

    CHECK(e("(x^2-1)/(x+1)") * L.one() == e("x-1"));
    CHECK((e("1/x") + e("1/y")).to_string() == "(x + y)/(x*y)");
    CHECK_THROWS_AS(L.zero().inv(), Error);
    try {
        (void)L.zero().inv();
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::DivisionByZero);
    }
    CHECK_THROWS_AS(e("x") + Field::rationals().one(), Error);
    try {
        (void)(e("x") + Field::rationals().one());
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::DescriptorMismatch);
    }
}

TEST_CASE("canonicalize examples") {
    Field L = Field::function_field(Field::rationals(), {"x"});
    Coeffs K = L.coeffs();
    Poly x = Poly::variable(0), one = Poly::constant(1);
    Poly x2m1 = sub(mul(x, x, K), one, K);
    CHECK(FieldElement::canonicalize(L, x2m1, sub(x, one, K)) == L.parse_element("x+1"));
    FieldElement h = FieldElement::canonicalize(L, scale(x, 2, K), Poly::constant(4));
    CHECK(h.to_string() == "1/2*x");
    CHECK(h.denominator().is_one());
    FieldElement z = FieldElement::canonicalize(L, Poly(), add(pow(x, 3, K), one, K));
    CHECK(z.is_zero());
    CHECK(z.denominator().is_one());
    CHECK_THROWS_AS(FieldElement::canonicalize(L, x, Poly()), Error);
    // idempotent
    FieldElement a = L.parse_element("(3*x^2 - 3)/(6*x + 6)");
    CHECK(FieldElement::canonicalize(L, a.numerator(), a.denominator()) == a);
}

TEST_CASE("evaluate examples") {
    Field L = kxy();
    Field Q = Field::rationals();
    CHECK(L.parse_element("x/y").evaluate({Q.from_int(2), Q.from_int(3)}) == Q.parse_element("2/3"));
    CHECK(L.parse_element("(x+y)/(x*y)").evaluate({Q.one(), Q.one()}) == Q.from_int(2));
    try {
        (void)L.parse_element("1/(x-1)").evaluate({Q.one(), Q.from_int(5)});
        FAIL("expected a pole");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::PoleAtPoint);
    }
    // reduction mod p of a Q-coefficient function
    Field F = Field::prime(7);
    CHECK(L.parse_element("x/2").evaluate({F.from_int(3), F.one()}) == F.from_int(5));
}

TEST_CASE("scalar text syntax") {
    Field L = kxy();
    CHECK(L.parse_element(" ( x^2 * y - 1 ) / ( 3*y + 2 ) ").to_string() == "(1/3*x^2*y - 1/3)/(y + 2/3)");
    CHECK(Field::rationals().parse_element("-6/4").to_string() == "-3/2");
    CHECK(Field::prime(5).parse_element("1/2").to_string() == "3");
    CHECK_THROWS_AS(L.parse_element("x + w"), ParseError);
    CHECK_THROWS_AS(L.parse_element("(x + 1"), ParseError);
    CHECK_THROWS_AS(L.parse_element("x / (y - y)"), Error);
    // printed forms parse back to the same element
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        FieldElement a = random_element(kxyz(), rng, 3, 7);
        CHECK(kxyz().parse_element(a.to_string()) == a);
    }
}

TEST_CASE("univariate gcd agrees with dense Euclid") {
    Field L = Field::function_field(Field::rationals(), {"x"});
    Coeffs K = L.coeffs();
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        Poly c = random_poly(L, rng, 3, 4, 3);
        Poly a = mul(c, random_poly(L, rng, 4, 4, 4), K);
        Poly b = mul(c, random_poly(L, rng, 4, 4, 4), K);
        if (a.is_zero() || b.is_zero()) continue;
        Dense expect = dense_gcd(to_dense(a), to_dense(b));
        CHECK(to_dense(gcd(a, b, K)) == expect);
    }
}

TEST_CASE("multivariate gcd contains planted factor") {
    for (Field L : {kxyz(), Field::function_field(Field::prime(101), {"x", "y", "z"})}) {
        Coeffs K = L.coeffs();
        Rng rng(5);
        for (int i = 0; i < 100; ++i) {
            Poly f = random_poly(L, rng, 3, 5, 3);
            Poly g = random_poly(L, rng, 3, 5, 3), h = random_poly(L, rng, 3, 5, 3);
            if (f.is_zero() || g.is_zero() || h.is_zero()) continue;
            Poly d = gcd(mul(f, g, K), mul(f, h, K), K);
            CHECK(d.lead().c == 1);
            CHECK_NOTHROW(exact_div(d, f, K));
            CHECK_NOTHROW(exact_div(mul(f, g, K), d, K));
            CHECK_NOTHROW(exact_div(mul(f, h, K), d, K));
            // cofactors share nothing more
            Poly rest = gcd(exact_div(mul(f, g, K), d, K), exact_div(mul(f, h, K), d, K), K);
            CHECK(rest.is_one());
        }
    }
}

TEST_CASE("canonical form is unique") {
    Field L = kxyz();
    Coeffs K = L.coeffs();
    Rng rng(17);
    for (int i = 0; i < 1000; ++i) {
        Poly a = random_poly(L, rng, 2, 6, 3), b;
        while (b.is_zero()) b = random_poly(L, rng, 2, 6, 3);
        Poly c;
        while (c.is_zero()) c = random_poly(L, rng, 2, 6, 3);
        FieldElement u = FieldElement::canonicalize(L, a, b);
        FieldElement v = FieldElement::canonicalize(L, mul(a, c, K), mul(b, c, K));
        REQUIRE(u == v);
        CHECK(u.to_string() == v.to_string());
        CHECK(u.denominator().lead().c == 1);
    }
}

TEST_CASE("field axioms on random triples") {
    for (Field f : {Field::rationals(), Field::prime(101), kxy(), kxyz(),
                    Field::function_field(Field::prime(13), {"s", "t"})}) {
        Rng rng(23);
        for (int i = 0; i < 150; ++i) {
            FieldElement a = random_element(f, rng, 2), b = random_element(f, rng, 2), c = random_element(f, rng, 2);
            CHECK((a + b) + c == a + (b + c));
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * (b + c) == a * b + a * c);
            CHECK(a + b == b + a);
            CHECK(a * b == b * a);
            CHECK(a - a == f.zero());
            if (!a.is_zero()) CHECK(a * a.inv() == f.one());
        }
    }
}

TEST_CASE("evaluation is a ring homomorphism") {
    Field L = kxyz();
    Field Q = Field::rationals();
    Rng rng(29);
    int checked = 0;
    for (int i = 0; i < 300; ++i) {
        FieldElement a = random_element(L, rng, 2), b = random_element(L, rng, 2);
        std::vector<FieldElement> pt;
        for (int k = 0; k < 3; ++k) pt.push_back(random_element(Q, rng, 0, 9));
        try {
            FieldElement ea = a.evaluate(pt), eb = b.evaluate(pt);
            CHECK((a + b).evaluate(pt) == ea + eb);
            CHECK((a * b).evaluate(pt) == ea * eb);
            ++checked;
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::PoleAtPoint);
        }
    }
    CHECK(checked > 250);
}
