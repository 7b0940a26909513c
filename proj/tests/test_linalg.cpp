#include "doctest.h"

#include "exactlift/error.hpp"
#include "exactlift/linalg.hpp"
#include "exactlift/rng.hpp"

using namespace xl;

namespace {

Matrix parse_matrix(Field f, std::vector<std::vector<const char*>> rows) {
    std::vector<Vector> rs;
    for (auto& r : rows) {
        Vector v;
        for (auto s : r) v.push_back(f.parse_element(s));
        rs.push_back(v);
    }
    return Matrix::from_rows(f, rs);
}

Vector parse_vector(Field f, std::vector<const char*> xs) {
    Vector v;
    for (auto s : xs) v.push_back(f.parse_element(s));
    return v;
}

Matrix random_matrix(Field f, Rng& rng, size_t r, size_t c, int degree) {
    Matrix m(f, r, c);
    // sparse-ish, with occasional dependent rows, so ranks vary
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < c; ++j)
            if (rng.chance(2, 3)) m(i, j) = random_element(f, rng, degree, 4);
    if (r >= 2 && rng.chance(1, 2)) {
        FieldElement s = random_element(f, rng, degree, 3);
        for (size_t j = 0; j < c; ++j) m(r - 1, j) = s * m(0, j);
    }
    return m;
}

// Independent rank: count of nonzero rows after plain elimination with
// the largest-index nonzero pivot (a different pivot rule than the library).
size_t oracle_rank(Matrix m) {
    size_t rank = 0;
    std::vector<bool> used(m.rows(), false);
    for (size_t c = m.cols(); c-- > 0;) {
        size_t p = m.rows();
        for (size_t i = m.rows(); i-- > 0;)
            if (!used[i] && !m(i, c).is_zero()) {
                p = i;
                break;
            }
        if (p == m.rows()) continue;
        used[p] = true;
        ++rank;
        for (size_t i = 0; i < m.rows(); ++i) {
            if (used[i] || m(i, c).is_zero()) continue;
            FieldElement f = m(i, c) / m(p, c);
            for (size_t j = 0; j < m.cols(); ++j) m(i, j) -= f * m(p, j);
        }
    }
    return rank;
}

}  // namespace

TEST_CASE("rank examples") {
    Field Q = Field::rationals();
    Field kx = Field::function_field(Q, {"x"});
    CHECK(rank(Matrix::identity(Q, 3)) == 3);
    CHECK(rank(Matrix(Q, 4, 2)) == 0);
    CHECK(rank(parse_matrix(kx, {{"x", "1"}, {"x^2", "x"}})) == 1);
}

TEST_CASE("kernel examples") {
    Field Q = Field::rationals();
    Field kx = Field::function_field(Q, {"x"});
    CHECK(kernel_basis(Matrix::identity(Q, 2)).dim() == 0);
    auto k1 = kernel_basis(parse_matrix(Q, {{"1", "-1"}}));
    REQUIRE(k1.dim() == 1);
    CHECK(k1.vectors()[0] == parse_vector(Q, {"1", "1"}));
    auto k2 = kernel_basis(parse_matrix(kx, {{"x", "-1"}}));
    REQUIRE(k2.dim() == 1);
    CHECK(k2.vectors()[0] == parse_vector(kx, {"1", "x"}));
}

TEST_CASE("solve examples") {
    Field Q = Field::rationals();
    Vector b = parse_vector(Q, {"1", "-2", "7/3"});
    CHECK(solve(Matrix::identity(Q, 3), b) == b);
    CHECK_FALSE(solve(Matrix(Q, 3, 3), b).has_value());
    CHECK(solve(parse_matrix(Q, {{"1", "1"}}), parse_vector(Q, {"2"})) == parse_vector(Q, {"2", "0"}));
}

TEST_CASE("cokernel examples") {
    Field Q = Field::rationals();
    Field kx = Field::function_field(Q, {"x"});
    CHECK(cokernel_basis(Matrix::identity(Q, 4)).dim() == 0);
    CHECK(cokernel_basis(Matrix(Q, 3, 2)).dim() == 3);
    CHECK(cokernel_basis(parse_matrix(kx, {{"x"}, {"1"}})).dim() == 1);
}

TEST_CASE("quotient coordinates") {
    Field Q = Field::rationals();
    Matrix m = parse_matrix(Q, {{"1"}, {"1"}, {"0"}});
    Quotient q(m);
    REQUIRE(q.dim() == 2);
    CHECK(q.is_zero_class(parse_vector(Q, {"3", "3", "0"})));
    // (1,0,0) == -(0,1,0) modulo (1,1,0)
    CHECK(q.coordinates(parse_vector(Q, {"1", "0", "0"})) == q.coordinates(-Q.one() * parse_vector(Q, {"0", "1", "0"})));
}

TEST_CASE("rank-nullity and kernel vectors on random matrices") {
    Field kxyz = Field::function_field(Field::rationals(), {"x", "y", "z"});
    struct Case {
        Field f;
        int count, max_dim, degree;
    };
    for (const Case& c : {Case{Field::rationals(), 500, 6, 0}, Case{Field::prime(101), 500, 6, 0},
                          Case{Field::prime(2), 500, 6, 0}, Case{kxyz, 500, 3, 1}}) {
        Rng rng(41);
        for (int i = 0; i < c.count; ++i) {
            size_t r = rng.range(1, c.max_dim), cols = rng.range(1, c.max_dim);
            Matrix m = random_matrix(c.f, rng, r, cols, c.degree);
            size_t rk = rank(m);
            SubspaceBasis k = kernel_basis(m);
            REQUIRE(rk + k.dim() == cols);
            CHECK(rk == oracle_rank(m));
            CHECK(cokernel_basis(m).dim() == r - rk);
            Vector v = zero_vector(c.f, cols);
            for (const auto& b : k.vectors()) {
                CHECK(is_zero(m.apply(b)));
                v = v + random_element(c.f, rng, c.degree, 3) * b;
            }
            CHECK(is_zero(m.apply(v)));
            // kernel basis is in reduced echelon form
            for (size_t a = 0; a < k.dim(); ++a) {
                CHECK(k.vectors()[a][k.pivots()[a]].is_one());
                if (a) CHECK(k.pivots()[a] > k.pivots()[a - 1]);
                for (size_t b = 0; b < k.dim(); ++b)
                    if (a != b) CHECK(k.vectors()[b][k.pivots()[a]].is_zero());
            }
            // solve finds preimages of image vectors
            Vector x = zero_vector(c.f, cols);
            for (auto& e : x) e = random_element(c.f, rng, c.degree, 3);
            auto sol = solve(m, m.apply(x));
            REQUIRE(sol.has_value());
            CHECK(m.apply(*sol) == m.apply(x));
        }
    }
}

TEST_CASE("rank over k(x,y,z) matches random specializations") {
    Field Q = Field::rationals();
    Field L = Field::function_field(Q, {"x", "y", "z"});
    Rng rng(43);
    for (int i = 0; i < 60; ++i) {
        Matrix m = random_matrix(L, rng, rng.range(1, 4), rng.range(1, 4), 1);
        size_t rk = rank(m);
        std::vector<FieldElement> pt;
        for (int k = 0; k < 3; ++k) pt.push_back(Q.from_int(rng.range(1000, 100000)));
        Matrix s(Q, m.rows(), m.cols());
        bool pole = false;
        for (size_t a = 0; a < m.rows() && !pole; ++a)
            for (size_t b = 0; b < m.cols(); ++b) {
                try {
                    s(a, b) = m(a, b).evaluate(pt);
                } catch (const Error&) {
                    pole = true;
                    break;
                }
            }
        if (pole) continue;
        CHECK(rank(s) == rk);
    }
}
