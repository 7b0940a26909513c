#include "doctest.h"

#include "exactlift/error.hpp"
#include "exactlift/quiver.hpp"
#include "exactlift/rng.hpp"

using namespace xl;

namespace {

Quiver random_quiver(Rng& rng, int max_vertices = 5, int max_arrows = 8) {
    int n = int(rng.range(1, max_vertices));
    int m = int(rng.range(0, max_arrows));
    std::vector<std::string> vs;
    for (int i = 0; i < n; ++i) vs.push_back("v" + std::to_string(i));
    std::vector<Arrow> as;
    for (int k = 0; k < m; ++k) as.push_back({"e" + std::to_string(k), int(rng.below(n)), int(rng.below(n))});
    return Quiver(vs, as);
}

DimVector random_dims(Rng& rng, int n, long max) {
    DimVector d(n);
    for (auto& x : d) x = rng.range(0, max);
    return d;
}

}  // namespace

TEST_CASE("euler form examples") {
    Quiver three = *Quiver::named("threeloop"), k4 = *Quiver::named("kronecker4"), a2 = *Quiver::named("a2");
    CHECK(euler_form(three, {1}, {1}) == -2);
    CHECK(euler_form(k4, {1, 1}, {1, 1}) == -2);
    CHECK(euler_form(a2, {1, 0}, {0, 1}) == -1);
    CHECK_THROWS_AS(euler_form(k4, {1}, {1, 1}), Error);
}

TEST_CASE("symmetric form examples") {
    CHECK(symmetric_form(Quiver::kronecker(4), {1, 1}, {1, 1}) == -4);
    CHECK(symmetric_form(Quiver::loops(3), {1}, {1}) == -4);
    CHECK(symmetric_form(*Quiver::named("jordan"), {1}, {1}) == 0);
}

TEST_CASE("fundamental region examples") {
    CHECK(in_fundamental_region(Quiver::loops(3), {1}));
    CHECK_FALSE(in_fundamental_region(Quiver::linear(2), {1, 1}));
    CHECK(in_fundamental_region(Quiver::loops(1), {1}));
    // disconnected support
    Quiver two_jordans({"1", "2"}, {{"a", 0, 0}, {"b", 1, 1}});
    CHECK_FALSE(in_fundamental_region(two_jordans, {1, 1}));
    try {
        in_fundamental_region(Quiver::loops(3), {0});
        FAIL("zero vector accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ZeroVector);
    }
}

TEST_CASE("indivisible negative search examples") {
    CHECK(find_indivisible_negative(Quiver::loops(3), 4, 3) == DimVector{1});
    CHECK(find_indivisible_negative(Quiver::kronecker(4), 4, 3) == DimVector{1, 1});
    CHECK_FALSE(find_indivisible_negative(Quiver::linear(2), 1, 10).has_value());
    // Dynkin quivers have empty fundamental region
    for (int n = 1; n <= 4; ++n) CHECK_FALSE(find_indivisible_negative(Quiver::linear(n), 1, 4).has_value());
    // 3-Kronecker: vectors of norm <= 4 reach at best -2; (2,3) gives -10
    auto v = find_indivisible_negative(Quiver::kronecker(3), 4, 5);
    REQUIRE(v.has_value());
    CHECK(*v == DimVector{2, 3});
}

TEST_CASE("codim vector examples") {
    CHECK(codim_vector(Quiver::linear(2), {1, 1}) == std::vector<long>{1, 0});
    CHECK(codim_vector(Quiver::loops(3), {1}) == std::vector<long>{-2});
    CHECK(codim_vector(Quiver::kronecker(4), {1, 1}) == std::vector<long>{1, -3});
}

TEST_CASE("moduli dimension examples") {
    CHECK(moduli_dimension(Quiver::kronecker(4), {1, 1}) == 3);
    CHECK(moduli_dimension(Quiver::loops(3), {1}) == 3);
    CHECK(moduli_dimension(Quiver::loops(1), {1}) == 1);
    try {
        moduli_dimension(Quiver::linear(2), {1, 1});
        FAIL("accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotInFundamentalRegion);
    }
    try {
        moduli_dimension(Quiver::kronecker(4), {2, 2});
        FAIL("accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DivisibleVector);
    }
}

TEST_CASE("form properties on random quivers") {
    Rng rng(7);
    for (int t = 0; t < 300; ++t) {
        Quiver q = random_quiver(rng);
        int n = q.num_vertices();
        DimVector a = random_dims(rng, n, 4), b = random_dims(rng, n, 4), c = random_dims(rng, n, 4);
        long s = rng.range(-3, 3);
        DimVector apc(n), sa(n);
        for (int i = 0; i < n; ++i) apc[i] = a[i] + c[i], sa[i] = s * a[i];
        CHECK(euler_form(q, apc, b) == euler_form(q, a, b) + euler_form(q, c, b));
        CHECK(euler_form(q, b, apc) == euler_form(q, b, a) + euler_form(q, b, c));
        CHECK(euler_form(q, sa, b) == s * euler_form(q, a, b));
        CHECK(symmetric_form(q, a, b) == symmetric_form(q, b, a));
        CHECK(symmetric_form(q, a, a) % 2 == 0);
        CHECK(dot(codim_vector(q, a), b) == euler_form(q, a, b));
    }
}

TEST_CASE("search output passes independent re-checks") {
    Rng rng(9);
    int found = 0;
    for (int t = 0; t < 150; ++t) {
        Quiver q = random_quiver(rng, 4, 7);
        long n = rng.range(1, 6);
        auto v = find_indivisible_negative(q, n, 3);
        if (!v) continue;
        ++found;
        CHECK(is_indivisible(*v));
        CHECK(in_fundamental_region(q, *v));
        CHECK(symmetric_form(q, *v, *v) <= -n);
        // minimality: nothing with smaller l1-norm qualifies
        long norm = 0;
        for (long x : *v) norm += x;
        auto smaller = find_indivisible_negative(q, n, std::min<long>(3, norm - 1));
        if (smaller) {
            long sn = 0;
            for (long x : *smaller) sn += x;
            CHECK(sn >= norm);
        }
    }
    CHECK(found > 20);
}

TEST_CASE("named quivers and vector syntax") {
    CHECK(Quiver::named("kronecker4")->num_arrows() == 4);
    CHECK(Quiver::named("threeloop")->num_vertices() == 1);
    CHECK_FALSE(Quiver::named("nonsense").has_value());
    CHECK(parse_vector("1,1") == std::vector<long>{1, 1});
    CHECK(parse_vector("(-1, 1)") == std::vector<long>{-1, 1});
    CHECK_THROWS_AS(parse_vector("1,,2"), ParseError);
    CHECK(Quiver::kronecker(2).is_acyclic());
    CHECK_FALSE(Quiver::loops(1).is_acyclic());
}
