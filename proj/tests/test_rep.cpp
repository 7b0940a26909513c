#include "doctest.h"

#include "exactlift/error.hpp"
#include "exactlift/examples.hpp"
#include "exactlift/rep.hpp"
#include "exactlift/rng.hpp"

using namespace xl;

namespace {

Quiver random_quiver(Rng& rng, int max_vertices, int max_arrows, bool acyclic = false) {
    int n = int(rng.range(1, max_vertices));
    int m = int(rng.range(0, max_arrows));
    std::vector<std::string> vs;
    for (int i = 0; i < n; ++i) vs.push_back("v" + std::to_string(i));
    std::vector<Arrow> as;
    for (int k = 0; k < m; ++k) {
        int t = int(rng.below(n)), h = int(rng.below(n));
        if (acyclic) {
            if (t == h) continue;
            if (t > h) std::swap(t, h);
        }
        as.push_back({"e" + std::to_string(k), t, h});
    }
    return Quiver(vs, as);
}

QuiverRep random_rep(const Quiver& q, Field f, Rng& rng, long max_dim) {
    DimVector d(q.num_vertices());
    for (auto& x : d) x = rng.range(0, max_dim);
    std::vector<Matrix> mats;
    for (const auto& a : q.arrows()) {
        Matrix m(f, d[a.head], d[a.tail]);
        for (size_t r = 0; r < m.rows(); ++r)
            for (size_t c = 0; c < m.cols(); ++c) m(r, c) = random_element(f, rng, 1, 3);
        mats.push_back(std::move(m));
    }
    return QuiverRep(q, f, d, mats);
}

Matrix scalar(Field f, long v) {
    Matrix m(f, 1, 1);
    m(0, 0) = f.from_int(v);
    return m;
}

// number of intertwiners V -> W over F_2 by enumerating every vertex-wise map
uint64_t count_intertwiners(const QuiverRep& v, const QuiverRep& w) {
    Field f = v.field();
    const Quiver& q = v.quiver();
    size_t total = 0;
    for (int i = 0; i < q.num_vertices(); ++i) total += w.dim(i) * v.dim(i);
    uint64_t count = 0;
    for (uint64_t bits = 0; bits < (uint64_t(1) << total); ++bits) {
        RepMorphism m;
        size_t k = 0;
        for (int i = 0; i < q.num_vertices(); ++i) {
            Matrix fi(f, w.dim(i), v.dim(i));
            for (long r = 0; r < w.dim(i); ++r)
                for (long c = 0; c < v.dim(i); ++c) fi(r, c) = f.from_int((bits >> k++) & 1);
            m.maps.push_back(fi);
        }
        if (is_morphism(v, w, m)) ++count;
    }
    return count;
}

}  // namespace

TEST_CASE("generic point representations are Schur with three-dimensional Ext") {
    Field L = generic_point_field();
    for (const QuiverRep& v : {threeloop_generic(L), kronecker_generic(L)}) {
        HomSpace e = hom_space(v, v);
        CHECK(e.dim == 1);
        CHECK(is_schur(v));
        CHECK(ext_space(v, v).dim() == 3);
        for (const auto& b : e.basis) CHECK(is_morphism(v, v, b));
    }
}

TEST_CASE("hom and ext on small examples") {
    Field Q = Field::rationals();
    Quiver a2 = Quiver::linear(2);
    CHECK(hom_space(QuiverRep::simple(a2, Q, 0), QuiverRep::simple(a2, Q, 1)).dim == 0);
    // Ext(S_1, S_2) is one-dimensional for the arrow 1 -> 2
    CHECK(ext_space(QuiverRep::simple(a2, Q, 0), QuiverRep::simple(a2, Q, 1)).dim() == 1);
    CHECK(ext_space(QuiverRep::simple(a2, Q, 1), QuiverRep::simple(a2, Q, 0)).dim() == 0);

    QuiverRep v = threeloop_generic(generic_point_field());
    CHECK_FALSE(is_schur(direct_sum(v, v)));
    CHECK(hom_space(direct_sum(v, v), direct_sum(v, v)).dim == 4);
    CHECK(is_schur(QuiverRep::simple(Quiver::kronecker(4), Q, 1)));
    CHECK_THROWS_AS(hom_space(v, QuiverRep::simple(a2, generic_point_field(), 0)), Error);
}

TEST_CASE("projectives have no Ext") {
    Rng rng(19);
    Field F = Field::prime(101);
    for (int t = 0; t < 40; ++t) {
        Quiver q = random_quiver(rng, 4, 5, true);
        QuiverRep w = random_rep(q, F, rng, 2);
        for (int i = 0; i < q.num_vertices(); ++i) {
            QuiverRep p = projective(q, F, i);
            CHECK(ext_space(p, w).dim() == 0);
            // Hom(P_i, W) = W_i
            CHECK(long(hom_space(p, w).dim) == w.dim(i));
        }
    }
    CHECK_THROWS_AS(projective(Quiver::loops(1), F, 0), Error);
}

TEST_CASE("perpendicular object for the 4-Kronecker generic point") {
    Field L = generic_point_field();
    QuiverRep w = kronecker_perp_object(Field::rationals());
    CHECK(w.dims() == DimVector{1, 3});
    QuiverRep wl = extend_scalars(w, L);
    QuiverRep v = kronecker_generic(L);
    CHECK(perp_check(wl, v));
    CHECK_FALSE(perp_check(v, v));
    Field Q = Field::rationals();
    Quiver k4 = Quiver::kronecker(4);
    CHECK_FALSE(perp_check(projective(k4, Q, 0), QuiverRep::simple(k4, Q, 0)));

    CHECK(semistable_witness_check(wl, v, {-1, 1}));
    CHECK_FALSE(semistable_witness_check(QuiverRep::zero(k4, L, {0, 0}), v, {-1, 1}));
    CHECK_FALSE(semistable_witness_check(wl, v, {0, 0}));
    // positive multiple of lambda is not a witness
    CHECK_FALSE(semistable_witness_check(wl, v, {1, -1}));
    try {
        semistable_witness_check(wl, v, {1, 1});
        FAIL("accepted non-orthogonal weight");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::WeightNotOrthogonal);
    }
}

TEST_CASE("specialization") {
    Field L = generic_point_field();
    Field Q = Field::rationals();
    QuiverRep s = specialize(threeloop_generic(L), {Q.zero(), Q.zero(), Q.zero()});
    for (const auto& m : s.mats()) CHECK(m.is_zero());
    QuiverRep k = specialize(kronecker_generic(L), {Q.one(), Q.one(), Q.one()});
    for (const auto& m : k.mats()) CHECK(m(0, 0).is_one());
    Matrix pole(L, 1, 1);
    pole(0, 0) = L.parse_element("1/(x - 1)");
    QuiverRep bad(Quiver::loops(1), L, {1}, {pole});
    try {
        specialize(bad, {Q.one(), Q.one(), Q.one()});
        FAIL("pole not reported");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::PoleAtPoint);
    }
    // specialization respects composition of intertwiners
    QuiverRep v = kronecker_generic(L);
    HomSpace h = hom_space(v, v);
    std::vector<FieldElement> pt{Q.from_int(2), Q.from_int(3), Q.from_int(5)};
    QuiverRep vs = specialize(v, pt);
    for (const auto& f : h.basis) {
        RepMorphism fs;
        for (const auto& m : f.maps) {
            Matrix e(Q, m.rows(), m.cols());
            for (size_t r = 0; r < m.rows(); ++r)
                for (size_t c = 0; c < m.cols(); ++c) e(r, c) = m(r, c).evaluate(pt);
            fs.maps.push_back(e);
        }
        CHECK(is_morphism(vs, vs, fs));
    }
}

TEST_CASE("Euler identity on random pairs over F_101") {
    Rng rng(101);
    Field F = Field::prime(101);
    for (int t = 0; t < 200; ++t) {
        Quiver q = random_quiver(rng, 5, 7);
        QuiverRep v = random_rep(q, F, rng, 3), w = random_rep(q, F, rng, 3);
        HomSpace h = hom_space(v, w);
        long e = long(ext_space(v, w).dim());
        REQUIRE(long(h.dim) - e == euler_form(q, v.dims(), w.dims()));
        for (const auto& f : h.basis) CHECK(is_morphism(v, w, f));
    }
}

TEST_CASE("hom dimension agrees with exhaustive count over F_2") {
    Rng rng(2);
    Field F = Field::prime(2);
    for (int t = 0; t < 60; ++t) {
        Quiver q = random_quiver(rng, 3, 3);
        QuiverRep v = random_rep(q, F, rng, 2), w = random_rep(q, F, rng, 2);
        size_t total = 0;
        for (int i = 0; i < q.num_vertices(); ++i) total += w.dim(i) * v.dim(i);
        if (total > 14) continue;
        CHECK(count_intertwiners(v, w) == (uint64_t(1) << hom_space(v, w).dim));
    }
}

TEST_CASE("stability oracle on the 4-Kronecker family") {
    Quiver k4 = Quiver::kronecker(4);
    for (unsigned long p : {2UL, 3UL}) {
        Field F = Field::prime(p);
        unsigned long total = p * p * p * p;
        for (unsigned long code = 0; code < total; ++code) {
            std::vector<Matrix> mats;
            unsigned long c = code;
            bool all_zero = true;
            for (int a = 0; a < 4; ++a) {
                long x = long(c % p);
                c /= p;
                all_zero &= x == 0;
                mats.push_back(scalar(F, x));
            }
            QuiverRep v(k4, F, {1, 1}, mats);
            StabilityResult r = stability_bruteforce(v, {-1, 1}, 1000);
            CHECK(r.verdict == (all_zero ? StabilityVerdict::unstable : StabilityVerdict::stable));
            if (all_zero) CHECK(r.witness == DimVector{1, 0});
        }
    }
}

TEST_CASE("stability oracle edge cases") {
    Field F = Field::prime(3);
    Quiver k4 = Quiver::kronecker(4);
    QuiverRep v(k4, F, {1, 1}, {scalar(F, 1), scalar(F, 0), scalar(F, 2), scalar(F, 0)});
    // lambda = 0: the subrep (0,1) exists, so strictly semistable
    CHECK(stability_bruteforce(v, {0, 0}, 1000).verdict == StabilityVerdict::strictly_semistable);
    // a simple representation is stable for lambda = 0
    CHECK(stability_bruteforce(QuiverRep::simple(k4, F, 0), {0, 0}, 1000).verdict == StabilityVerdict::stable);
    try {
        stability_bruteforce(QuiverRep::zero(Quiver::loops(1), Field::prime(101), {3}), {0}, 1000);
        FAIL("budget not enforced");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BudgetExceeded);
    }
    try {
        stability_bruteforce(kronecker_generic(generic_point_field()), {-1, 1}, 1000);
        FAIL("infinite field accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotFiniteField);
    }
}

TEST_CASE("stability verdict is invariant under base change") {
    Rng rng(31);
    Field F = Field::prime(3);
    for (int t = 0; t < 40; ++t) {
        Quiver q = Quiver::kronecker(int(rng.range(1, 3)));
        DimVector d{rng.range(1, 2), rng.range(1, 2)};
        std::vector<Matrix> mats;
        for (int a = 0; a < q.num_arrows(); ++a) {
            Matrix m(F, d[1], d[0]);
            for (size_t r = 0; r < m.rows(); ++r)
                for (size_t c = 0; c < m.cols(); ++c) m(r, c) = F.from_int(long(rng.below(3)));
            mats.push_back(m);
        }
        QuiverRep v(q, F, d, mats);
        std::vector<Matrix> g;
        for (long n : d) {
            Matrix m(F, n, n);
            do {
                for (size_t r = 0; r < m.rows(); ++r)
                    for (size_t c = 0; c < m.cols(); ++c) m(r, c) = F.from_int(long(rng.below(3)));
            } while (rank(m) < size_t(n));
            g.push_back(m);
        }
        Weight lambda{-d[1], d[0]};
        CHECK(stability_bruteforce(v, lambda, 100000).verdict ==
              stability_bruteforce(transport(v, g), lambda, 100000).verdict);
    }
}
