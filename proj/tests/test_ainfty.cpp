#include "doctest.h"

#include "exactlift/ainfty.hpp"
#include "exactlift/error.hpp"
#include "exactlift/rng.hpp"

using namespace xl;

namespace {

Field qq() { return Field::rationals(); }

template <class F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Internal;
}

bool same(const SparseMatrix& a, const SparseMatrix& b) { return a.to_dense() == b.to_dense(); }

// random m-type operations (degree 2 - n) on a random graded space
TaylorMap random_operations(Rng& rng, int max_arity) {
    Field k = qq();
    size_t n = size_t(rng.range(1, 3));
    std::vector<std::string> names;
    std::vector<int> degs;
    for (size_t i = 0; i < n; ++i) {
        names.push_back("x" + std::to_string(i));
        degs.push_back(int(rng.range(-2, 2)));
    }
    GradedSpace s(names, degs);
    TaylorMap m(k, s, std::nullopt, s, 2, max_arity, -1);
    for (int a = 1; a <= max_arity; ++a) {
        Matrix c(k, n, m.source_size(a));
        for (size_t j = 0; j < c.cols(); ++j)
            for (size_t i = 0; i < n; ++i)
                if (s.degree(i) == m.source_degree(a, j) + m.degree(a) && rng.chance(1, 2))
                    c(i, j) = k.from_int(rng.range(-3, 3));
        m.set_dense(a, c);
    }
    return m;
}

// ---- dense oracle: the bar construction materialized with Kronecker products

Matrix kron(const Matrix& a, const Matrix& b) {
    Field k = a.field();
    Matrix out(k, a.rows() * b.rows(), a.cols() * b.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j)
            if (!a(i, j).is_zero())
                for (size_t r = 0; r < b.rows(); ++r)
                    for (size_t c = 0; c < b.cols(); ++c) out(i * b.rows() + r, j * b.cols() + c) = a(i, j) * b(r, c);
    return out;
}

Matrix parity(const GradedSpace& s) {
    Matrix p(qq(), s.dim(), s.dim());
    for (size_t i = 0; i < s.dim(); ++i) p(i, i) = s.degree(i) % 2 == 0 ? qq().one() : -qq().one();
    return p;
}

Matrix power(const Matrix& m, int n) {
    Matrix r = Matrix::identity(qq(), 1);
    for (int i = 0; i < n; ++i) r = kron(r, m);
    return r;
}

// sum over p of id^p (x) b (x) id^r on V^n with the Koszul sign of b (odd) passing id^p
Matrix insertion(const GradedSpace& v, const Matrix& b, int q, int n) {
    Matrix id = Matrix::identity(qq(), v.dim()), s = parity(v);
    Matrix total;
    for (int p = 0; p + q <= n; ++p) {
        Matrix t = kron(kron(power(s, p), b), power(id, n - p - q));
        total = total.rows() == 0 ? t : total + t;
    }
    return total;
}

}  // namespace

TEST_CASE("suspension signs") {
    Rng rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        TaylorMap m = random_operations(rng, 3);
        TaylorMap back = unshift(shift_signs(m));
        for (int a = 1; a <= 3; ++a) CHECK(same(back.component(a), m.component(a)));
    }
    Field k = qq();
    GradedSpace s({"x", "y"}, {0, 1});
    TaylorMap m(k, s, std::nullopt, s, 2, 2, -1);
    Matrix m1(k, 2, 2);
    m1(1, 0) = k.one();
    m.set_dense(1, m1);
    Matrix m2(k, 2, 4);
    m2(0, 0) = k.one();  // x x = x
    m2(1, 1) = k.one();  // x y = y
    m2(1, 2) = k.one();  // y x = y
    m.set_dense(2, m2);
    TaylorMap b = shift_signs(m);
    CHECK(b.component(1).to_dense()(1, 0) == -k.one());
    CHECK(b.component(2).to_dense()(0, 0) == k.one());
    CHECK(b.component(2).to_dense()(1, 1) == k.one());
    CHECK(b.component(2).to_dense()(1, 2) == -k.one());
    CHECK(code_of([&] { shift_signs(b); }) == ErrorCode::DegreeMismatch);
}

TEST_CASE("Taylor maps validate shape and degree") {
    Field k = qq();
    GradedSpace s({"x", "y"}, {0, 1});
    TaylorMap t(k, s, std::nullopt, s, 0, 3);
    CHECK(t.source_size(3) == 8);
    CHECK(t.decode(3, 5) == std::vector<size_t>{1, 0, 1});
    CHECK(t.encode({1, 0, 1}) == 5);
    Matrix bad(k, 2, 2);
    bad(1, 0) = k.one();
    CHECK(code_of([&] { t.set_dense(1, bad); }) == ErrorCode::DegreeMismatch);
    CHECK(code_of([&] { t.set_dense(1, Matrix(k, 3, 2)); }) == ErrorCode::ShapeMismatch);
    CHECK(code_of([&] { t.find(4); }) == ErrorCode::ArityBudgetExceeded);
    TaylorMap mod(k, s, GradedSpace({"m"}, {2}), s, 0, 3);
    CHECK(mod.source_size(2) == 2);
    CHECK(mod.source_degree(2, 1) == 3);
}

TEST_CASE("DG algebras satisfy the A-infinity relations") {
    Field k = qq();
    for (const auto& a : {massey_algebra(k, 1), massey_algebra(k, -1), massey_cohomology(k), acyclic_extension(k),
                          matrix_dg_algebra(k), upper_triangular2(k), dual_numbers(k, 1)})
        CHECK(coderivation_square(AInftyAlgebra::from_dg(a, 5), 5).empty());
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        GradedAlgebra t = random_triangular_dg(k, rng);
        CHECK(t.dim() == 6);
        auto a = AInftyAlgebra::from_dg(t, 5);
        CHECK(coderivation_square(a, 5).empty());
        CHECK(!a.unit());  // the unit is a sum of three basis elements
    }
    CHECK(AInftyAlgebra::from_dg(massey_algebra(k, 1)).strict_unit_holds());
    CHECK(!AInftyAlgebra::from_dg(upper_triangular2(k)).strict_unit_holds());
    // dropping 1.u = u breaks the Leibniz rule at arity 2
    auto a = AInftyAlgebra::from_dg(massey_algebra(k, 1), 3);
    TaylorMap b = a.b();
    SparseMatrix b2 = b.component(2);
    b2.column(0 * 8 + 3).clear();
    b.set(2, b2);
    AInftyAlgebra broken(k, a.space(), b, a.unit());
    auto v = coderivation_square(broken, 3);
    REQUIRE(!v.empty());
    CHECK(v.front().arity == 2);
    CHECK(code_of([&] { coderivation_square(a, 4); }) == ErrorCode::ArityBudgetExceeded);
}

TEST_CASE("homotopy associativity: b3 solved through operator matrices") {
    Field k = qq();
    auto a = AInftyAlgebra::from_dg(matrix_dg_algebra(k), 4);
    // b_2 + [b_1, h] with h(s e11, s e12) = s(e12 x) keeps arity 2 but breaks associativity
    TaylorMap h = a.b().empty_like(0);
    SparseMatrix hm(k, 12, 144);
    hm.add(4, 0 * 12 + 3, k.one());
    h.set(2, hm);
    TaylorMap b = a.b();
    SparseMatrix b2 = b.component(2);
    SparseMatrix br = compose_insert(b, h, 2, 2);
    SparseMatrix hb = compose_insert(h, b, 2, 1);
    Matrix nb2 = b2.to_dense() + br.to_dense() - hb.to_dense();
    b.set_dense(2, nb2);
    REQUIRE(!coderivation_square(AInftyAlgebra(k, a.space(), b, a.unit()), 3).empty());
    TaylorMap b1only = b.truncated(1);
    for (int n = 3; n <= 3; ++n) {
        AInftyAlgebra cur(k, a.space(), b, a.unit());
        SparseMatrix res = compose_insert(b, b, n);
        CochainSpace from(b, n, 1), to(b, n, 2);
        SparseMatrix op = operator_matrix(b, from, to, [&](const TaylorMap& x) {
            SparseMatrix r = compose_insert(b1only, x, n, n);
            SparseMatrix s = compose_insert(x, b1only, n, 1);
            for (size_t j = 0; j < s.cols(); ++j)
                for (const auto& [i, v] : s.column(j)) r.add(i, j, v);
            return r;
        });
        Vector rhs = to.flatten(res);
        for (auto& x : rhs) x = -x;
        auto sol = solve(op, rhs);
        REQUIRE(sol);
        b.set(n, from.unflatten(*sol));
    }
    AInftyAlgebra solved(k, a.space(), b, a.unit());
    CHECK(coderivation_square(solved, 3).empty());
    CHECK(!b.component(3).is_zero());
}

TEST_CASE("morphism defects") {
    Field k = qq();
    auto f1 = fixture_f1(k);
    TaylorMap id(k, f1.a.b().bar(), std::nullopt, f1.c.b().bar(), 0, 5);
    id.set_dense(1, Matrix::identity(k, 8));
    auto dd = morphism_defect(f1.a, f1.c, id, 4);
    CHECK(dd.d.is_zero_up_to(5));
    CHECK(dd.top_closed);

    TaylorMap psi = id.empty_like(0);
    psi.set_dense(1, f1.phi);
    CHECK(code_of([&] { morphism_defect(f1.a, f1.c, psi, 2); }) == ErrorCode::DefectAtLowerArity);
    auto d1 = morphism_defect(f1.a, f1.c, psi, 1);
    CHECK(d1.top_arity == 2);
    CHECK(!d1.d.component(2).is_zero());
    CHECK(d1.top_closed);

    // D_3 against the materialized bar construction, on the Massey control where it survives
    auto f2 = fixture_f2(k, 1);
    LiftOptions opt;
    opt.arity = 2;
    auto lift = lift_algebra_morphism(f2.a, f2.c, f2.phi, opt);
    REQUIRE(lift.success);
    auto d2 = morphism_defect(f2.a, f2.c, lift.map, 2);
    CHECK(d2.top_closed);
    GradedSpace v = f2.a.b().bar();
    Matrix a2 = f2.a.b().component(2).to_dense();
    Matrix c1 = f2.c.b().component(1).to_dense(), c2 = f2.c.b().component(2).to_dense();
    Matrix p1 = lift.map.component(1).to_dense(), p2 = lift.map.component(2).to_dense();
    Matrix oracle = c2 * (kron(p1, p2) + kron(p2, p1)) - p2 * insertion(v, a2, 2, 3);
    CHECK(d2.d.component(3).to_dense() == oracle);
    CHECK(!oracle.is_zero());
    // D_2 of the lifted map vanishes in the oracle as well (b_{A,1} = 0 here)
    CHECK((c1 * p2 + c2 * kron(p1, p1) - p1 * a2).is_zero());
}

TEST_CASE("algebra morphism lifts") {
    Field k = qq();
    auto f1 = fixture_f1(k);
    auto r1 = lift_algebra_morphism(f1.a, f1.c, f1.phi);
    CHECK(r1.success);
    CHECK(r1.verified_to == 5);
    CHECK(morphism_residual(f1.a, f1.c, r1.map, 5).is_zero_up_to(5));

    auto id = lift_algebra_morphism(f1.a, f1.a, Matrix::identity(k, 8));
    CHECK(id.success);
    CHECK(id.map.arities() == std::vector<int>{1});

    auto fm = fixture_matrix(k);
    auto rm = lift_algebra_morphism(fm.a, fm.c, fm.phi);
    CHECK(rm.success);
    CHECK(!rm.map.is_zero_up_to(5));
    CHECK(!rm.map.truncated(1).plus(rm.map, -k.one()).is_zero_up_to(5));
    CHECK(morphism_residual(fm.a, fm.c, rm.map, 5).is_zero_up_to(5));
    auto ha = cohomology_algebra(fm.a, algebra_cohomology(fm.a));
    CHECK(hh_condition(ha, cohomology_bimodule(fm.a, fm.c, fm.phi), LiftMode::lift_object, 5).holds);

    // a non-multiplicative map on cohomology
    Matrix swap(k, 12, 4);
    swap(0, 0) = swap(3, 1) = swap(6, 2) = swap(9, 3) = k.one();
    swap(3, 0) = k.one();
    CHECK(code_of([&] { lift_algebra_morphism(fm.a, fm.c, swap); }) == ErrorCode::NotCohomologyMultiplicative);
    Matrix not_chain = Matrix::identity(k, 8);
    not_chain(3, 3) = k.from_int(2);
    CHECK(code_of([&] { lift_algebra_morphism(f1.a, f1.c, not_chain); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("the Massey control is obstructed with a certified class") {
    Field k = qq();
    auto f2 = fixture_f2(k, 1);
    auto r = lift_algebra_morphism(f2.a, f2.c, f2.phi);
    CHECK(!r.success);
    CHECK(r.verified_to == 2);
    REQUIRE(r.obstruction);
    const auto& o = *r.obstruction;
    CHECK(o.arity == 3);
    CHECK(o.hochschild_degree == 3);
    CHECK(o.internal_degree == -1);
    CHECK(!is_zero(o.coordinates));
    CHECK(o.closed);
    CHECK(!o.vanishing);
    CHECK(o.augmented_rank == o.coboundary_rank + 1);
    CHECK(o.group_rank >= 1);
    CHECK(morphism_residual(f2.a, f2.c, r.map, 2).is_zero_up_to(2));

    // the same algebra with av = -w has vanishing Massey product
    auto g = fixture_f2(k, -1);
    auto rg = lift_algebra_morphism(g.a, g.c, g.phi);
    CHECK(rg.success);
    CHECK(morphism_residual(g.a, g.c, rg.map, 5).is_zero_up_to(5));
}

TEST_CASE("cohomology ranks agree with the bar complex") {
    Field k = qq();
    auto f2 = fixture_f2(k, 1);
    auto H = cohomology_algebra(f2.a, algebra_cohomology(f2.a));
    auto X = cohomology_bimodule(f2.a, f2.c, f2.phi);
    CHECK(X.dim() == 4);
    for (int n = 1; n <= 3; ++n)
        for (int j = -2; j <= 1; ++j) {
            // normalized and unnormalized complexes compute the same groups
            SparseMatrix din = hochschild_differential(H, X, n - 1, j, false);
            SparseMatrix dout = hochschild_differential(H, X, n, j, false);
            size_t dim = BarCochains(H, X, n, j, false).dim();
            size_t hh = dim - rank(dout) - rank(din);
            BarOptions o;
            o.max_arity = 3;
            CHECK(bar_hh(H, X, n, j, o).rank == hh);
        }
}

TEST_CASE("gauge choices do not change verdicts") {
    Field k = qq();
    auto fm = fixture_matrix(k);
    auto f2 = fixture_f2(k, 1);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        LiftOptions o;
        o.gauge_seed = seed;
        auto r = lift_algebra_morphism(fm.a, fm.c, fm.phi, o);
        CHECK(r.success);
        CHECK(morphism_residual(fm.a, fm.c, r.map, 5).is_zero_up_to(5));
        auto r2 = lift_algebra_morphism(f2.a, f2.c, f2.phi, o);
        CHECK(!r2.success);
        REQUIRE(r2.obstruction);
        CHECK(r2.obstruction->arity == 3);
        CHECK(!r2.obstruction->vanishing);
    }
}

TEST_CASE("module morphism lifts") {
    Field k = qq();
    // M = N = B over B = k[t]/t^2
    auto b = AInftyAlgebra::from_dg(dual_numbers(k));
    GradedAlgebra dn = dual_numbers(k);
    std::vector<Matrix> act;
    for (size_t i = 0; i < 2; ++i) {
        Matrix a(k, 2, 2);
        for (size_t c = 0; c < 2; ++c)
            for (size_t r = 0; r < 2; ++r) a(r, c) = dn.product(i, c)[r];
        act.push_back(a);
    }
    auto reg = AInftyModule::from_dg(b, GradedSpace({"1", "t"}, {0, 0}), Matrix(k, 2, 2), act);
    CHECK(module_square(reg, 5).empty());
    auto r = lift_module_morphism(reg, reg, Matrix::identity(k, 2));
    CHECK(r.success);
    CHECK(r.map.arities() == std::vector<int>{1});

    auto f3 = fixture_f3(k);
    CHECK(module_square(f3.m, 5).empty());
    CHECK(module_square(f3.n, 5).empty());
    auto r3 = lift_module_morphism(f3.m, f3.n, f3.f1);
    CHECK(!r3.success);
    CHECK(r3.verified_to == 2);
    REQUIRE(r3.obstruction);
    CHECK(r3.obstruction->arity == 3);
    CHECK(r3.obstruction->hochschild_degree == 2);
    CHECK(r3.obstruction->internal_degree == -1);
    CHECK(r3.obstruction->closed);
    CHECK(!r3.obstruction->vanishing);
    CHECK(module_morphism_residual(f3.m, f3.n, r3.map, 2).is_zero_up_to(2));

    Matrix wrong(k, 6, 1);
    wrong(4, 0) = k.one();  // m -> f, but t f = ef is not a boundary
    CHECK(code_of([&] { lift_module_morphism(f3.m, f3.n, wrong); }) == ErrorCode::NotCohomologyMultiplicative);
}

TEST_CASE("null-homotopies") {
    Field k = qq();
    auto ff = fixture_f3_faithful(k);
    // g = 0
    TaylorMap zero(k, ff.m.b().bar(), ff.m.space(), ff.n.space(), 0, 5);
    auto h0 = nullhomotopy(ff.m, ff.n, zero);
    CHECK(h0.h.is_zero_up_to(5));
    REQUIRE(h0.conditions);
    CHECK(h0.conditions->holds);

    // g = b h + h b for a random h
    Rng rng(4);
    TaylorMap h(k, ff.m.b().bar(), ff.m.space(), ff.n.space(), -1, 4);
    for (int n = 1; n <= 3; ++n) {
        CochainSpace cs(h, n, -1);
        Vector v = zero_vector(k, cs.dim());
        for (auto& x : v) x = k.from_int(rng.range(-2, 2));
        h.set(n, cs.unflatten(v));
    }
    TaylorMap g = zero.empty_like(0);
    g.set_max_arity(4);
    for (int n = 1; n <= 4; ++n) g.set(n, module_bracket(ff.m, ff.n, h, n));
    NullhomotopyOptions o;
    o.arity = 4;
    auto res = nullhomotopy(ff.m, ff.n, g, o);
    for (int n = 1; n <= 4; ++n) CHECK(same(module_bracket(ff.m, ff.n, res.h, n), g.component(n)));

    // the lift of m -> x is null-homotopic
    auto lift = lift_module_morphism(ff.m, ff.n, ff.f1);
    REQUIRE(lift.success);
    auto r = nullhomotopy(ff.m, ff.n, lift.map, o);
    CHECK(r.verified_to == 4);
    for (int n = 1; n <= 4; ++n) CHECK(same(module_bracket(ff.m, ff.n, r.h, n), lift.map.component(n)));

    // F3's arity-2 lift is not null-homotopic: m -> x survives in cohomology
    auto f3 = fixture_f3(k);
    TaylorMap g3(k, f3.m.b().bar(), f3.m.space(), f3.n.space(), 0, 2);
    g3.set_dense(1, f3.f1);
    NullhomotopyOptions o2;
    o2.arity = 1;
    o2.require_conditions = false;
    CHECK(code_of([&] { nullhomotopy(f3.m, f3.n, g3, o2); }) == ErrorCode::ObstructionNonzero);
}

TEST_CASE("module structures from cohomology actions") {
    Field k = qq();
    // strict: k[t]/t^3 on itself
    GradedAlgebra tp = truncated_polynomial(k, 3);
    auto b = AInftyAlgebra::from_dg(tp);
    std::vector<Matrix> act;
    for (size_t i = 0; i < 3; ++i) {
        Matrix a(k, 3, 3);
        for (size_t c = 0; c < 3; ++c)
            for (size_t r = 0; r < 3; ++r) a(r, c) = tp.product(i, c)[r];
        act.push_back(a);
    }
    auto s = lift_module_structure(b, GradedSpace(tp.names(), tp.degrees()), Matrix(k, 3, 3), act);
    CHECK(s.success);
    CHECK(s.given_action_used);
    CHECK(s.strictly_unital);
    REQUIRE(s.module);
    CHECK(module_square(*s.module, 5).empty());

    auto f4 = fixture_f4(k);
    auto r4 = lift_module_structure(f4.b, f4.space, f4.d, f4.action);
    CHECK(r4.success);
    CHECK(!r4.given_action_used);
    REQUIRE(r4.module);
    CHECK(module_square(*r4.module, 5).empty());
    REQUIRE(r4.conditions);
    CHECK(r4.conditions->holds);

    auto f2m = fixture_f2_module(k);
    auto r2 = lift_module_structure(f2m.b, f2m.space, f2m.d, f2m.action);
    CHECK(!r2.success);
    REQUIRE(r2.lift.obstruction);
    CHECK(r2.lift.obstruction->arity == 3);
    CHECK(!r2.lift.obstruction->vanishing);
    CHECK(r2.lift.obstruction->closed);

    // an action that is not multiplicative on cohomology
    auto bad = f4.action;
    bad[1] = Matrix::identity(k, 4);
    CHECK(code_of([&] { lift_module_structure(f4.b, f4.space, f4.d, bad); }) == ErrorCode::NotCohomologyMultiplicative);
}
