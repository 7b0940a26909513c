#include "exactlift/ainfty.hpp"
#include "exactlift/error.hpp"
#include "exactlift/rng.hpp"

namespace xl {

namespace {

struct Table {
    Field k;
    size_t n;
    std::vector<std::vector<Vector>> t;
    Table(Field k_, size_t n_) : k(k_), n(n_), t(n_, std::vector<Vector>(n_, zero_vector(k_, n_))) {}
    void set(size_t i, size_t j, size_t r, long c = 1) { t[i][j][r] = k.from_int(c); }
    void unit(size_t u) {
        for (size_t i = 0; i < n; ++i) set(u, i, i), set(i, u, i);
    }
};

Matrix diagonal(Field k, const std::vector<long>& d) {
    Matrix m(k, d.size(), d.size());
    for (size_t i = 0; i < d.size(); ++i) m(i, i) = k.from_int(d[i]);
    return m;
}

}  // namespace

GradedAlgebra massey_algebra(Field k, int sign) {
    enum { one, a, b, u, v, p, q, w };
    Table t(k, 8);
    t.unit(one);
    t.set(a, b, p);
    t.set(b, a, q);
    t.set(u, a, w);
    t.set(a, v, w, sign);
    Matrix d(k, 8, 8);
    d(p, u) = k.one();
    d(q, v) = k.one();
    return GradedAlgebra(k, {"1", "a", "b", "u", "v", "p", "q", "w"}, {0, 1, 1, 1, 1, 2, 2, 2}, unit_vector(k, 8, one),
                         t.t, d);
}

GradedAlgebra massey_cohomology(Field k) {
    Table t(k, 4);
    t.unit(0);
    return GradedAlgebra(k, {"1", "a", "b", "w"}, {0, 1, 1, 2}, unit_vector(k, 4, 0), t.t);
}

Matrix massey_section(Field k) {
    Matrix s(k, 8, 4);
    s(0, 0) = s(1, 1) = s(2, 2) = s(7, 3) = k.one();
    return s;
}

GradedAlgebra acyclic_extension(Field k) {
    Table t(k, 3);
    t.unit(0);
    Matrix d(k, 3, 3);
    d(2, 1) = k.one();
    return GradedAlgebra(k, {"1", "x", "y"}, {0, -1, 0}, unit_vector(k, 3, 0), t.t, d);
}

GradedAlgebra matrix_dg_algebra(Field k) {
    GradedAlgebra m = matrix_algebra2(k), e = acyclic_extension(k);
    size_t n = m.dim() * e.dim();
    auto idx = [&](size_t i, size_t s) { return i * e.dim() + s; };
    std::vector<std::string> names;
    std::vector<int> degrees;
    for (size_t i = 0; i < m.dim(); ++i)
        for (size_t s = 0; s < e.dim(); ++s) {
            names.push_back(s == 0 ? m.names()[i] : m.names()[i] + e.names()[s]);
            degrees.push_back(e.degree(s));
        }
    std::vector<std::vector<Vector>> prod(n, std::vector<Vector>(n, zero_vector(k, n)));
    for (size_t i = 0; i < m.dim(); ++i)
        for (size_t s = 0; s < e.dim(); ++s)
            for (size_t j = 0; j < m.dim(); ++j)
                for (size_t t = 0; t < e.dim(); ++t)
                    for (size_t r = 0; r < m.dim(); ++r)
                        for (size_t u = 0; u < e.dim(); ++u) {
                            FieldElement c = m.product(i, j)[r] * e.product(s, t)[u];
                            if (!c.is_zero()) prod[idx(i, s)][idx(j, t)][idx(r, u)] += c;
                        }
    Vector unit = zero_vector(k, n);
    for (size_t i = 0; i < m.dim(); ++i) unit[idx(i, 0)] = m.unit()[i];
    Matrix d(k, n, n);
    for (size_t i = 0; i < m.dim(); ++i)
        for (size_t s = 0; s < e.dim(); ++s)
            for (size_t u = 0; u < e.dim(); ++u) d(idx(i, u), idx(i, s)) = (*e.differential())(u, s);
    return GradedAlgebra(k, names, degrees, unit, prod, d);
}

GradedAlgebra random_triangular_dg(Field k, Rng& rng) {
    std::vector<int> deg;
    for (int i = 0; i < 3; ++i) deg.push_back(int(rng.range(-1, 1)));
    Matrix d(k, 3, 3);
    for (size_t i = 0; i < 3; ++i)
        for (size_t j = i + 1; j < 3; ++j)
            if (deg[i] == deg[j] + 1 && rng.chance(3, 4)) d(i, j) = random_nonzero(k, rng, 0, 4);
    // d^2 = 0 needs d01 d12 = 0
    if (!d(0, 1).is_zero() && !d(1, 2).is_zero()) (rng.chance(1, 2) ? d(0, 1) : d(1, 2)) = k.zero();
    GradedSpace v({"v0", "v1", "v2"}, deg);
    GradedAlgebra end = endomorphism_algebra(k, v, d);
    std::vector<size_t> keep;
    for (size_t r = 0; r < 3; ++r)
        for (size_t c = r; c < 3; ++c) keep.push_back(r * 3 + c);
    std::vector<size_t> pos(9, keep.size());
    for (size_t i = 0; i < keep.size(); ++i) pos[keep[i]] = i;
    size_t n = keep.size();
    auto restrict = [&](const Vector& x) {
        Vector y = zero_vector(k, n);
        for (size_t i = 0; i < 9; ++i)
            if (!x[i].is_zero()) {
                if (pos[i] == n) throw Error(ErrorCode::Internal, "triangular matrices are not closed");
                y[pos[i]] = x[i];
            }
        return y;
    };
    std::vector<std::string> names;
    std::vector<int> degrees;
    std::vector<std::vector<Vector>> prod(n, std::vector<Vector>(n));
    Matrix dd(k, n, n);
    for (size_t i = 0; i < n; ++i) {
        names.push_back(end.names()[keep[i]]);
        degrees.push_back(end.degree(keep[i]));
        for (size_t j = 0; j < n; ++j) prod[i][j] = restrict(end.product(keep[i], keep[j]));
        Vector col = restrict(end.differential()->column(keep[i]));
        for (size_t r = 0; r < n; ++r) dd(r, i) = col[r];
    }
    return GradedAlgebra(k, names, degrees, restrict(end.unit()), prod, dd);
}

AlgebraMorphismFixture fixture_f1(Field k) {
    GradedAlgebra a = massey_algebra(k, 1);
    // id + d sigma + sigma d with sigma(p) = u
    Matrix phi = Matrix::identity(k, 8);
    phi(5, 5) = k.from_int(2);
    phi(3, 3) = k.from_int(2);
    auto aa = AInftyAlgebra::from_dg(a);
    return {"F1", aa, aa, phi};
}

AlgebraMorphismFixture fixture_f2(Field k, int sign) {
    return {sign == 1 ? "F2" : "F2-", AInftyAlgebra::from_dg(massey_cohomology(k)),
            AInftyAlgebra::from_dg(massey_algebra(k, sign)), massey_section(k)};
}

StructureFixture fixture_f2_module(Field k) {
    // m0 (degree 0), m2 (degree 2); w m0 = m2 and everything else of positive degree acts by zero
    std::vector<Matrix> action(8, Matrix(k, 2, 2));
    action[0] = Matrix::identity(k, 2);
    action[7](1, 0) = k.one();
    return {"F2-module", AInftyAlgebra::from_dg(massey_algebra(k, 1)), GradedSpace({"m0", "m2"}, {0, 2}),
            Matrix(k, 2, 2), action};
}

namespace {

AInftyModule dual_module(const AInftyAlgebra& b, GradedSpace space, const Matrix& d, const Matrix& t) {
    return AInftyModule::from_dg(b, std::move(space), d, {Matrix::identity(b.field(), d.rows()), t});
}

}  // namespace

ModuleFixture fixture_f3(Field k) {
    auto b = AInftyAlgebra::from_dg(dual_numbers(k));
    auto m = dual_module(b, GradedSpace({"m"}, {0}), Matrix(k, 1, 1), Matrix(k, 1, 1));
    // x, ex, y, ey, f, ef with dy = ex
    Matrix d(k, 6, 6), t(k, 6, 6);
    d(1, 2) = k.one();
    t(1, 0) = t(3, 2) = t(5, 4) = k.one();
    auto n = dual_module(b, GradedSpace({"x", "ex", "y", "ey", "f", "ef"}, {0, 0, -1, -1, 0, 0}), d, t);
    Matrix f1(k, 6, 1);
    f1(0, 0) = k.one();
    return {"F3", m, n, f1};
}

ModuleFixture fixture_f3_faithful(Field k) {
    auto b = AInftyAlgebra::from_dg(dual_numbers(k));
    auto m = dual_module(b, GradedSpace({"m"}, {0}), Matrix(k, 1, 1), Matrix(k, 1, 1));
    // y, ey, x, ex, f, ef with dy = x, d(ey) = ex
    Matrix d(k, 6, 6), t(k, 6, 6);
    d(2, 0) = d(3, 1) = k.one();
    t(1, 0) = t(3, 2) = t(5, 4) = k.one();
    auto n = dual_module(b, GradedSpace({"y", "ey", "x", "ex", "f", "ef"}, {-1, -1, 0, 0, 0, 0}), d, t);
    Matrix f1(k, 6, 1);
    f1(2, 0) = k.one();
    return {"F3-faithful", m, n, f1};
}

StructureFixture fixture_f4(Field k) {
    Matrix d(k, 4, 4);
    d(2, 1) = k.one();
    std::vector<Matrix> action{diagonal(k, {1, 1, 0, 0}), Matrix(k, 4, 4), diagonal(k, {0, 0, 1, 1})};
    return {"F4", AInftyAlgebra::from_dg(upper_triangular2(k)), GradedSpace({"m0", "m1", "m2", "m3"}, {0, 0, 1, 1}), d,
            action};
}

AlgebraMorphismFixture fixture_matrix(Field k) {
    GradedAlgebra m = matrix_algebra2(k);
    Matrix phi(k, 12, 4);
    for (size_t i = 0; i < 4; ++i) phi(i * 3, i) = k.one();
    // the y-components: e11 -> e12 y, e21 -> e11 y
    phi(1 * 3 + 2, 0) = k.one();
    phi(0 * 3 + 2, 2) = k.one();
    return {"matrix", AInftyAlgebra::from_dg(m), AInftyAlgebra::from_dg(matrix_dg_algebra(k)), phi};
}

}  // namespace xl
