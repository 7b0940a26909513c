#include <algorithm>
#include <set>

#include "ainfty_detail.hpp"
#include "exactlift/ainfty.hpp"
#include "exactlift/error.hpp"
#include "exactlift/rng.hpp"

namespace xl {

using detail::add_into;
using detail::sign;

namespace {

// ---------------------------------------------------------------- linear operators on one cochain entry
//
// The lifting equations are linear in the unknown component. Their matrices
// are assembled entry by entry: a EntryOp sends the elementary cochain E_{r,c}
// (source column c to target row r) to triplets (column, row, value).

struct Triplet {
    size_t col, row;
    FieldElement v;
};
using EntryOp = std::function<void(size_t c, size_t r, std::vector<Triplet>& out)>;

GradedSpace tuple_space(const TaylorMap& shape, int n) {
    size_t k = shape.source_size(n);
    std::vector<std::string> names;
    std::vector<int> degrees;
    names.reserve(k);
    for (size_t c = 0; c < k; ++c) {
        names.push_back("t" + std::to_string(c));
        degrees.push_back(shape.source_degree(n, c));
    }
    return GradedSpace(std::move(names), std::move(degrees));
}

// x o (sum id (x) inner_q (x) id), x of arity o on arity-n tuples
EntryOp right_insert(const TaylorMap& xshape, int o, const TaylorMap& inner, int n, FieldElement coef) {
    int q = n - o + 1;
    TaylorMap id(xshape.field(), xshape.bar(),
                 xshape.is_module_shape() ? std::optional<GradedSpace>(xshape.module()) : std::nullopt,
                 tuple_space(xshape, o), 0, n);
    size_t k = xshape.source_size(o);
    SparseMatrix one(xshape.field(), k, k);
    for (size_t c = 0; c < k; ++c) one.column(c).emplace_back(c, xshape.field().one());
    id.set(o, std::move(one));
    SparseMatrix m = compose_insert(id, inner, n, q);
    auto rows = std::make_shared<std::vector<std::vector<std::pair<size_t, FieldElement>>>>(k);
    for (size_t c2 = 0; c2 < m.cols(); ++c2)
        for (const auto& [c, v] : m.column(c2)) (*rows)[c].emplace_back(c2, v);
    return [rows, coef](size_t c, size_t r, std::vector<Triplet>& out) {
        for (const auto& [c2, v] : (*rows)[c]) out.push_back({c2, r, coef * v});
    };
}

// outer_o o (id^p (x) x (x) id^r), x of arity q, on arity o + q - 1 tuples
EntryOp left_insert(const TaylorMap& outer, int o, const TaylorMap& xshape, int q, int x_degree, FieldElement coef) {
    const SparseMatrix* oc = outer.find(o);
    if (!oc) return [](size_t, size_t, std::vector<Triplet>&) {};
    struct Slot {
        size_t prefix, suffix, suffix_size, ocol;
        bool negative;
    };
    bool xmod = xshape.is_module_shape();
    int nbar = outer.is_module_shape() ? o - 1 : o;
    size_t bar = outer.bar().dim();
    auto table = std::make_shared<std::vector<std::vector<Slot>>>(xshape.target().dim());
    for (size_t ocol = 0; ocol < oc->cols(); ++ocol) {
        if (oc->column(ocol).empty()) continue;
        auto digits = outer.decode(o, ocol);
        int plo = xmod ? o - 1 : 0, phi = xmod ? o - 1 : nbar - 1;
        size_t prefix = 0;
        int pdeg = 0;
        for (int p = 0; p < plo; ++p) {
            prefix = prefix * bar + digits[size_t(p)];
            pdeg += outer.bar().degree(digits[size_t(p)]);
        }
        for (int p = plo; p <= phi; ++p) {
            size_t suffix = 0, suffix_size = 1;
            for (int k = p + 1; k < o; ++k) {
                size_t rdx = outer.factor_dim(o, k);
                suffix = suffix * rdx + digits[size_t(k)];
                suffix_size *= rdx;
            }
            (*table)[digits[size_t(p)]].push_back(
                {prefix, suffix, suffix_size, ocol, (x_degree % 2 != 0) && (pdeg % 2 != 0)});
            if (p == phi) break;
            prefix = prefix * bar + digits[size_t(p)];
            pdeg += outer.bar().degree(digits[size_t(p)]);
        }
    }
    size_t xsize = xshape.source_size(q);
    return [table, oc, xsize, coef](size_t c, size_t r, std::vector<Triplet>& out) {
        for (const auto& s : (*table)[r]) {
            size_t col = (s.prefix * xsize + c) * s.suffix_size + s.suffix;
            FieldElement k = s.negative ? -coef : coef;
            for (const auto& [row, w] : oc->column(s.ocol)) out.push_back({col, row, k * w});
        }
    };
}

// outer_r o (f_1 (x) .. x .. (x) f_r) with x at `position`; all factors of degree 0
EntryOp tensor_slot(const TaylorMap& outer, const std::vector<std::pair<const TaylorMap*, int>>& factors, size_t position,
                 const TaylorMap& xshape, int xarity, FieldElement coef) {
    const SparseMatrix* oc = outer.find(int(factors.size()) + 1);
    if (!oc) return [](size_t, size_t, std::vector<Triplet>&) {};
    struct Combo {
        size_t src, tuple;
        FieldElement v;
    };
    size_t dim = outer.bar().dim();
    auto combos = [&](size_t lo, size_t hi, size_t& src_size, size_t& tuple_size) {
        std::vector<Combo> cur{{0, 0, outer.field().one()}};
        src_size = tuple_size = 1;
        for (size_t i = lo; i < hi; ++i) {
            const auto& [f, k] = factors[i];
            const SparseMatrix* m = f->find(k);
            std::vector<Combo> next;
            if (m)
                for (size_t c = 0; c < m->cols(); ++c)
                    for (const auto& [t, v] : m->column(c)) {
                        for (const auto& cb : cur) next.push_back({cb.src * f->source_size(k) + c, cb.tuple * dim + t, cb.v * v});
                    }
            cur = std::move(next);
            src_size *= f->source_size(k);
            tuple_size *= dim;
        }
        return cur;
    };
    size_t pre_src, pre_tuple, suf_src, suf_tuple;
    auto pre = std::make_shared<std::vector<Combo>>(combos(0, position, pre_src, pre_tuple));
    auto suf = std::make_shared<std::vector<Combo>>(combos(position, factors.size(), suf_src, suf_tuple));
    size_t xsize = xshape.source_size(xarity);
    return [=](size_t c, size_t r, std::vector<Triplet>& out) {
        for (const auto& a : *pre)
            for (const auto& b : *suf) {
                size_t tuple = (a.tuple * dim + r) * suf_tuple + b.tuple;
                size_t col = (a.src * xsize + c) * suf_src + b.src;
                FieldElement k = coef * a.v * b.v;
                for (const auto& [row, w] : oc->column(tuple)) out.push_back({col, row, k * w});
            }
    };
}

SparseMatrix assemble(const CochainSpace& from, const CochainSpace& to, const std::vector<EntryOp>& terms, Field f) {
    SparseMatrix m(f, to.dim(), from.dim());
    std::vector<Triplet> buf;
    for (size_t k = 0; k < from.dim(); ++k) {
        auto [c, r] = from.entry(k);
        buf.clear();
        for (const auto& t : terms) t(c, r, buf);
        SparseVec col;
        for (auto& e : buf) {
            auto idx = to.index(e.col, e.row);
            if (!idx) throw Error(ErrorCode::Internal, "operator leaves the homogeneous cochains");
            col.emplace_back(*idx, std::move(e.v));
        }
        std::sort(col.begin(), col.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        SparseVec merged;
        for (auto& e : col) {
            if (!merged.empty() && merged.back().first == e.first)
                merged.back().second += e.second;
            else
                merged.push_back(std::move(e));
        }
        std::erase_if(merged, [](const auto& e) { return e.second.is_zero(); });
        m.column(k) = std::move(merged);
    }
    return m;
}

// [b_1, x] for an algebra-shaped x of arity n and the given degree
std::vector<EntryOp> algebra_b1_terms(const AInftyAlgebra& a, const AInftyAlgebra& c, const TaylorMap& shape, int n,
                                   int degree) {
    Field f = a.field();
    return {left_insert(c.b(), 1, shape, n, degree, f.one()), right_insert(shape, n, a.b(), n, -sign(f, degree))};
}

// the arity-n part of (b_N x - (-1)^{|x|} x b_M) for x concentrated in arity `arity`
std::vector<EntryOp> module_terms(const AInftyModule& m, const AInftyModule& nm, const TaylorMap& shape, int arity,
                               int n, int degree) {
    Field f = m.algebra().field();
    int k = n - arity + 1;
    FieldElement s = -sign(f, degree);
    return {left_insert(nm.b(), k, shape, arity, degree, f.one()),
            right_insert(shape, arity, m.algebra().b(), n, s), right_insert(shape, arity, m.b(), n, s)};
}

struct Block {
    size_t row_block, col_block;
    const SparseMatrix* m;
};

SparseMatrix stack(Field f, const std::vector<size_t>& row_sizes, const std::vector<size_t>& col_sizes,
                   const std::vector<Block>& blocks) {
    std::vector<size_t> ro(row_sizes.size() + 1, 0), co(col_sizes.size() + 1, 0);
    for (size_t i = 0; i < row_sizes.size(); ++i) ro[i + 1] = ro[i] + row_sizes[i];
    for (size_t i = 0; i < col_sizes.size(); ++i) co[i + 1] = co[i] + col_sizes[i];
    SparseMatrix out(f, ro.back(), co.back());
    std::vector<std::vector<const Block*>> by_col(col_sizes.size());
    for (const auto& b : blocks) by_col[b.col_block].push_back(&b);
    for (size_t cb = 0; cb < col_sizes.size(); ++cb) {
        std::sort(by_col[cb].begin(), by_col[cb].end(),
                  [](const Block* x, const Block* y) { return x->row_block < y->row_block; });
        for (size_t j = 0; j < col_sizes[cb]; ++j) {
            SparseVec& dst = out.column(co[cb] + j);
            for (const Block* b : by_col[cb])
                for (const auto& [i, v] : b->m->column(j)) dst.emplace_back(ro[b->row_block] + i, v);
        }
    }
    return out;
}

Vector concat(const std::vector<Vector>& parts) {
    Vector out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

Vector slice(const Vector& v, size_t from, size_t n) { return Vector(v.begin() + long(from), v.begin() + long(from + n)); }

Vector negated(Vector v) {
    for (auto& x : v) x = -x;
    return v;
}

void check_budget(int n, int have_a, int have_b) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "arity must be positive");
    int cap = default_budgets().max_arity;
    if (n > cap)
        throw Error(ErrorCode::ArityBudgetExceeded,
                    "requested arity " + std::to_string(n) + " exceeds the budget " + std::to_string(cap));
    if (n > have_a || n > have_b)
        throw Error(ErrorCode::ArityBudgetExceeded, "structure maps are not known up to arity " + std::to_string(n));
}

// a seeded exact cochain [b_1, x] with |x| = degree - 1 and a few nonzero entries
SparseMatrix gauge_term(Rng rng, const TaylorMap& shape, int n, int degree,
                        const std::function<SparseMatrix(const TaylorMap&)>& bracket) {
    CochainSpace xs(shape, n, degree - 1);
    TaylorMap x = shape.empty_like(degree - 1);
    if (xs.dim() == 0) return shape.empty_like(degree).component(n);
    Vector v = zero_vector(shape.field(), xs.dim());
    for (int i = 0; i < 3; ++i) v[rng.below(xs.dim())] = shape.field().from_int(rng.range(-3, 3));
    x.set(n, xs.unflatten(v));
    return bracket(x);
}

// ---------------------------------------------------------------- obstruction classes

SparseVec evaluate(const TaylorMap& shape, int n, const SparseMatrix& d, const std::vector<const SparseVec*>& factors) {
    std::vector<std::pair<size_t, FieldElement>> cur{{0, shape.field().one()}};
    for (int p = 0; p < n; ++p) {
        std::vector<std::pair<size_t, FieldElement>> next;
        size_t rdx = shape.factor_dim(n, p);
        for (const auto& [col, v] : cur)
            for (const auto& [i, w] : *factors[size_t(p)]) next.emplace_back(col * rdx + i, v * w);
        cur = std::move(next);
    }
    SparseVec out;
    for (const auto& [col, v] : cur)
        if (!d.column(col).empty()) axpy(out, v, d.column(col));
    return out;
}

// sign relating a bar cochain on shifted arguments to a Hochschild cochain
long bar_epsilon(const std::vector<int>& degrees) {
    long e = 0, n = long(degrees.size());
    for (long i = 0; i < n; ++i) e += (n - 1 - i) * (degrees[size_t(i)] - 1);
    return e;
}

std::vector<size_t> mixed_digits(size_t id, size_t base, int n) {
    std::vector<size_t> d(static_cast<size_t>(n));
    for (int k = n - 1; k >= 0; --k) {
        d[size_t(k)] = id % base;
        id /= base;
    }
    return d;
}

ObstructionClass certify(const GradedAlgebra& h, const GradedBimodule& x, int arity, int hdeg, int j,
                         Vector coords) {
    Field f = h.field();
    ObstructionClass oc;
    oc.arity = arity;
    oc.hochschild_degree = hdeg;
    oc.internal_degree = j;
    BarCochains cochains(h, x, hdeg, j, false);
    oc.cochain_dim = cochains.dim();
    for (size_t i = 0; i < coords.size() && oc.support.size() < 4; ++i)
        if (!coords[i].is_zero()) oc.support.push_back(cochains.describe(i, h, x) + " = " + coords[i].to_string());
    SparseVec sc = to_sparse(coords);
    oc.closed = hochschild_differential(h, x, hdeg, j, false).apply(sc).empty();
    SparseMatrix din = hochschild_differential(h, x, hdeg - 1, j, false);
    SparseEchelon e(f);
    for (size_t c = 0; c < din.cols(); ++c) e.insert(din.column(c));
    oc.coboundary_rank = e.rank();
    e.insert(sc);
    oc.augmented_rank = e.rank();
    oc.vanishing = oc.augmented_rank == oc.coboundary_rank;
    BarOptions opt;
    opt.max_arity = hdeg;
    oc.group_rank = bar_hh(h, x, hdeg, j, opt).rank;
    oc.coordinates = std::move(coords);
    return oc;
}

ObstructionClass algebra_obstruction(const AInftyAlgebra& a, const AInftyAlgebra& c, const Matrix& phi,
                                     const TaylorMap& shape, const SparseMatrix& dk, int k) {
    auto ha = algebra_cohomology(a), hc = algebra_cohomology(c);
    GradedAlgebra H = cohomology_algebra(a, ha);
    GradedBimodule X = cohomology_bimodule(a, c, phi);
    int hdeg = k, j = 2 - k;
    BarCochains cochains(H, X, hdeg, j, false);
    Vector coords = zero_vector(a.field(), cochains.dim());
    std::vector<SparseVec> reps;
    for (const auto& r : ha.representatives) reps.push_back(to_sparse(r));
    size_t kh = reps.size(), total = 1;
    for (int i = 0; i < k; ++i) total *= kh;
    for (size_t id = 0; id < total; ++id) {
        auto t = mixed_digits(id, kh, k);
        std::vector<const SparseVec*> factors;
        std::vector<int> degs;
        for (size_t i : t) {
            factors.push_back(&reps[i]);
            degs.push_back(ha.space.degree(i));
        }
        SparseVec val = hc.project(evaluate(shape, k, dk, factors));
        FieldElement s = sign(a.field(), bar_epsilon(degs));
        for (const auto& [row, v] : val) {
            auto idx = cochains.index(t, row);
            if (!idx) throw Error(ErrorCode::Internal, "obstruction has the wrong internal degree");
            coords[*idx] = s * v;
        }
    }
    return certify(H, X, k, hdeg, j, std::move(coords));
}

ObstructionClass module_obstruction(const AInftyModule& m, const AInftyModule& nm, const TaylorMap& shape,
                                    const SparseMatrix& dk, int k) {
    Field f = m.algebra().field();
    auto hb = algebra_cohomology(m.algebra());
    auto hm = module_cohomology(m), hn = module_cohomology(nm);
    GradedAlgebra H = cohomology_algebra(m.algebra(), hb);
    GradedBimodule X = cohomology_hom_bimodule(m, nm);
    int n = k - 1, hdeg = n, j = 2 - k;
    BarCochains cochains(H, X, hdeg, j, false);
    Vector coords = zero_vector(f, cochains.dim());
    std::vector<SparseVec> breps, mreps;
    for (const auto& r : hb.representatives) breps.push_back(to_sparse(r));
    for (const auto& r : hm.representatives) mreps.push_back(to_sparse(r));
    size_t kb = breps.size(), km = mreps.size(), total = 1;
    for (int i = 0; i < n; ++i) total *= kb;
    for (size_t id = 0; id < total; ++id) {
        auto t = mixed_digits(id, kb, n);
        std::vector<const SparseVec*> factors;
        std::vector<int> degs;
        for (size_t i : t) {
            factors.push_back(&breps[i]);
            degs.push_back(hb.space.degree(i));
        }
        FieldElement s = sign(f, bar_epsilon(degs));
        factors.push_back(nullptr);
        for (size_t c = 0; c < km; ++c) {
            factors.back() = &mreps[c];
            SparseVec val = hn.project(evaluate(shape, k, dk, factors));
            for (const auto& [r, v] : val) {
                auto idx = cochains.index(t, r * km + c);
                if (!idx) throw Error(ErrorCode::Internal, "obstruction has the wrong internal degree");
                coords[*idx] = s * v;
            }
        }
    }
    return certify(H, X, k, hdeg, j, std::move(coords));
}

// ---------------------------------------------------------------- cohomology maps

Matrix cohomology_map(const ComplexCohomology& from, const ComplexCohomology& to, const Matrix& f1) {
    Matrix h(f1.field(), to.representatives.size(), from.representatives.size());
    for (size_t i = 0; i < from.representatives.size(); ++i) {
        Vector img = f1.apply(from.representatives[i]);
        SparseVec p;
        try {
            p = to.project(to_sparse(img));
        } catch (const Error&) {
            throw Error(ErrorCode::InvalidArgument, "the map does not send cocycles to cocycles");
        }
        for (const auto& [r, v] : p) h(r, i) = v;
    }
    return h;
}

void require_multiplicative(const AInftyAlgebra& a, const AInftyAlgebra& c, const Matrix& phi) {
    auto ha = algebra_cohomology(a), hc = algebra_cohomology(c);
    GradedAlgebra HA = cohomology_algebra(a, ha), HC = cohomology_algebra(c, hc);
    Matrix h = cohomology_map(ha, hc, phi);
    for (size_t i = 0; i < HA.dim(); ++i)
        for (size_t j = 0; j < HA.dim(); ++j)
            if (h.apply(HA.product(i, j)) != HC.multiply(h.column(i), h.column(j)))
                throw Error(ErrorCode::NotCohomologyMultiplicative,
                            "H(phi) does not preserve " + HA.names()[i] + " * " + HA.names()[j]);
    if (h.apply(HA.unit()) != HC.unit())
        throw Error(ErrorCode::NotCohomologyMultiplicative, "H(phi) does not preserve the unit");
}

// action of the i-th cohomology class of B on H(M), in class coordinates
Matrix class_action(const AInftyModule& m, const ComplexCohomology& hb, size_t i, const ComplexCohomology& hm) {
    Field f = m.algebra().field();
    size_t k = hm.representatives.size();
    Matrix out(f, k, k);
    const SparseMatrix* b2 = m.b().find(2);
    SparseVec a = to_sparse(hb.representatives[i]);
    for (size_t c = 0; c < k; ++c) {
        SparseVec y;
        if (b2)
            for (const auto& [bi, u] : a)
                for (const auto& [mi, v] : to_sparse(hm.representatives[c])) axpy(y, u * v, b2->column(bi * m.dim() + mi));
        for (const auto& [r, v] : hm.project(y)) out(r, c) = v;
    }
    return out;
}

void require_linear(const AInftyModule& m, const AInftyModule& nm, const Matrix& f1) {
    auto hb = algebra_cohomology(m.algebra());
    auto hm = module_cohomology(m), hn = module_cohomology(nm);
    Matrix h = cohomology_map(hm, hn, f1);
    for (size_t i = 0; i < hb.representatives.size(); ++i)
        if (!(h * class_action(m, hb, i, hm) == class_action(nm, hb, i, hn) * h))
            throw Error(ErrorCode::NotCohomologyMultiplicative,
                        "H(f_1) does not commute with the action of " + hb.space.names()[i]);
}

}  // namespace

// ---------------------------------------------------------------- algebra morphisms

LiftResult lift_algebra_morphism(const AInftyAlgebra& a, const AInftyAlgebra& c, const Matrix& phi,
                                 const LiftOptions& opt) {
    Field f = a.field();
    int N = opt.arity;
    check_budget(N, a.max_arity(), c.max_arity());
    if (phi.rows() != c.dim() || phi.cols() != a.dim())
        throw Error(ErrorCode::DimensionMismatch, "phi must be dim C x dim A");
    if (!coderivation_square(a, N).empty())
        throw Error(ErrorCode::InvalidArgument, "the source is not an A-infinity algebra");
    if (!coderivation_square(c, N).empty())
        throw Error(ErrorCode::InvalidArgument, "the target is not an A-infinity algebra");
    TaylorMap psi(f, a.b().bar(), std::nullopt, c.b().bar(), 0, N);
    psi.set_dense(1, phi);
    if (!algebra_bracket(a, c, psi, 1).is_zero()) throw Error(ErrorCode::InvalidArgument, "phi is not a chain map");
    require_multiplicative(a, c, phi);

    LiftResult res;
    auto bracket_at = [&](int n) {
        return [&a, &c, n](const TaylorMap& x) { return algebra_bracket(a, c, x, n); };
    };
    for (int k = 2; k <= N; ++k) {
        LiftStep st;
        st.arity = k;
        SparseMatrix dk = compose_morphism(c.b(), psi, k);
        add_into(dk, compose_insert(psi, a.b(), k), -f.one());
        st.defect_zero = dk.is_zero();
        SparseMatrix pk = psi.component(k);
        if (!st.defect_zero) {
            CochainSpace xk(psi, k, 0), yk(psi, k, 1);
            SparseMatrix bk = assemble(xk, yk, algebra_b1_terms(a, c, psi, k, 0), f);
            Vector rhs = negated(yk.flatten(dk));
            st.unknowns = xk.dim();
            st.equations = yk.dim();
            auto sol = solve(bk, rhs);
            if (sol) {
                pk = xk.unflatten(*sol);
            } else if (k >= 3) {
                // adjust psi_{k-1} by a cocycle delta as well
                CochainSpace xd(psi, k - 1, 0), yd(psi, k - 1, 1);
                SparseMatrix cd = assemble(xd, yd, algebra_b1_terms(a, c, psi, k - 1, 0), f);
                std::vector<std::pair<const TaylorMap*, int>> psi1{{&psi, 1}};
                std::vector<EntryOp> l{
                    tensor_slot(c.b(), psi1, 0, psi, k - 1, f.one()),
                    tensor_slot(c.b(), psi1, 1, psi, k - 1, f.one()),
                    right_insert(psi, k - 1, a.b(), k, -f.one()),
                };
                SparseMatrix ld = assemble(xd, yk, l, f);
                SparseMatrix sys = stack(f, {yd.dim(), yk.dim()}, {xd.dim(), xk.dim()},
                                         {{0, 0, &cd}, {1, 0, &ld}, {1, 1, &bk}});
                st.unknowns += xd.dim();
                st.equations += yd.dim();
                auto sol2 = solve(sys, concat({zero_vector(f, yd.dim()), rhs}));
                if (sol2) {
                    SparseMatrix prev = psi.component(k - 1);
                    add_into(prev, xd.unflatten(slice(*sol2, 0, xd.dim())), f.one());
                    psi.set(k - 1, prev);
                    pk = xk.unflatten(slice(*sol2, xd.dim(), xk.dim()));
                    st.adjusted = true;
                    sol = sol2;
                }
            }
            if (!sol) {
                res.steps.push_back(st);
                res.obstruction = algebra_obstruction(a, c, phi, psi, dk, k);
                res.map = psi.truncated(k - 1);
                res.verified_to = k - 1;
                return res;
            }
        }
        if (opt.gauge_seed) add_into(pk, gauge_term(Rng(*opt.gauge_seed).split(uint64_t(k)), psi, k, 0, bracket_at(k)), f.one());
        psi.set(k, pk);
        res.steps.push_back(st);
    }
    TaylorMap residual = morphism_residual(a, c, psi, N);
    if (!residual.is_zero_up_to(N)) throw Error(ErrorCode::Internal, "lifted morphism fails re-verification");
    res.success = true;
    res.map = psi;
    res.verified_to = N;
    return res;
}

// ---------------------------------------------------------------- module morphisms

LiftResult lift_module_morphism(const AInftyModule& m, const AInftyModule& nm, const Matrix& f1,
                                const LiftOptions& opt) {
    Field f = m.algebra().field();
    int N = opt.arity;
    check_budget(N, std::min(m.max_arity(), m.algebra().max_arity()),
                 std::min(nm.max_arity(), nm.algebra().max_arity()));
    if (!(m.algebra().b().bar() == nm.algebra().b().bar()))
        throw Error(ErrorCode::InvalidArgument, "modules over different algebras");
    if (f1.rows() != nm.dim() || f1.cols() != m.dim()) throw Error(ErrorCode::DimensionMismatch, "f_1 must be dim N x dim M");
    if (!module_square(m, N).empty()) throw Error(ErrorCode::InvalidArgument, "the source is not an A-infinity module");
    if (!module_square(nm, N).empty()) throw Error(ErrorCode::InvalidArgument, "the target is not an A-infinity module");
    TaylorMap fm(f, m.b().bar(), m.space(), nm.space(), 0, N);
    fm.set_dense(1, f1);
    if (!module_b1_bracket(m, nm, fm, 1).is_zero()) throw Error(ErrorCode::InvalidArgument, "f_1 is not a chain map");
    require_linear(m, nm, f1);

    LiftResult res;
    for (int k = 2; k <= N; ++k) {
        LiftStep st;
        st.arity = k;
        SparseMatrix dk = module_bracket(m, nm, fm, k);
        st.defect_zero = dk.is_zero();
        SparseMatrix pk = fm.component(k);
        if (!st.defect_zero) {
            CochainSpace xk(fm, k, 0), yk(fm, k, 1);
            SparseMatrix bk = assemble(xk, yk, module_terms(m, nm, fm, k, k, 0), f);
            Vector rhs = negated(yk.flatten(dk));
            st.unknowns = xk.dim();
            st.equations = yk.dim();
            auto sol = solve(bk, rhs);
            if (sol) {
                pk = xk.unflatten(*sol);
            } else if (k >= 3) {
                CochainSpace xd(fm, k - 1, 0), yd(fm, k - 1, 1);
                SparseMatrix cd = assemble(xd, yd, module_terms(m, nm, fm, k - 1, k - 1, 0), f);
                SparseMatrix ld = assemble(xd, yk, module_terms(m, nm, fm, k - 1, k, 0), f);
                SparseMatrix sys = stack(f, {yd.dim(), yk.dim()}, {xd.dim(), xk.dim()},
                                         {{0, 0, &cd}, {1, 0, &ld}, {1, 1, &bk}});
                st.unknowns += xd.dim();
                st.equations += yd.dim();
                auto sol2 = solve(sys, concat({zero_vector(f, yd.dim()), rhs}));
                if (sol2) {
                    SparseMatrix prev = fm.component(k - 1);
                    add_into(prev, xd.unflatten(slice(*sol2, 0, xd.dim())), f.one());
                    fm.set(k - 1, prev);
                    pk = xk.unflatten(slice(*sol2, xd.dim(), xk.dim()));
                    st.adjusted = true;
                    sol = sol2;
                }
            }
            if (!sol) {
                if (k == 2) throw Error(ErrorCode::Internal, "arity-2 equation unsolvable for a linear H(f_1)");
                res.steps.push_back(st);
                res.obstruction = module_obstruction(m, nm, fm, dk, k);
                res.map = fm.truncated(k - 1);
                res.verified_to = k - 1;
                return res;
            }
        }
        if (opt.gauge_seed)
            add_into(pk,
                     gauge_term(Rng(*opt.gauge_seed).split(uint64_t(k)), fm, k, 0,
                                [&, k](const TaylorMap& x) { return module_b1_bracket(m, nm, x, k); }),
                     f.one());
        fm.set(k, pk);
        res.steps.push_back(st);
    }
    TaylorMap residual = module_morphism_residual(m, nm, fm, N);
    if (!residual.is_zero_up_to(N)) throw Error(ErrorCode::Internal, "lifted module morphism fails re-verification");
    res.success = true;
    res.map = fm;
    res.verified_to = N;
    return res;
}

// ---------------------------------------------------------------- null-homotopies

NullhomotopyResult nullhomotopy(const AInftyModule& m, const AInftyModule& nm, const TaylorMap& g,
                                const NullhomotopyOptions& opt) {
    Field f = m.algebra().field();
    int N = opt.arity;
    check_budget(N, std::min(m.max_arity(), m.algebra().max_arity()),
                 std::min(nm.max_arity(), nm.algebra().max_arity()));
    if (!g.is_module_shape() || g.degree(1) != 0 || g.degree_slope() != 0)
        throw Error(ErrorCode::DegreeMismatch, "g must be a module map of degree 0");
    if (g.module().degrees() != m.space().degrees() || g.target().degrees() != nm.space().degrees())
        throw Error(ErrorCode::ShapeMismatch, "g does not go from M to N");
    if (g.max_arity() < N) throw Error(ErrorCode::ArityBudgetExceeded, "g is not known up to arity " + std::to_string(N));
    if (!module_morphism_residual(m, nm, g, N).is_zero_up_to(N))
        throw Error(ErrorCode::InvalidArgument, "g is not an A-infinity module morphism");

    NullhomotopyResult res;
    if (opt.require_conditions) {
        GradedAlgebra H = cohomology_algebra(m.algebra(), algebra_cohomology(m.algebra()));
        res.conditions = hh_condition(H, cohomology_hom_bimodule(m, nm), LiftMode::faithful, std::max(N - 1, 0));
        if (!res.conditions->holds)
            throw Error(ErrorCode::ObstructionNonzero, "HH^n(H*B, Hom(H*M, H*N))_{-n} does not vanish");
    }
    TaylorMap h(f, m.b().bar(), m.space(), nm.space(), -1, N);
    for (int n = 1; n <= N; ++n) {
        SparseMatrix cur = g.component(n);
        add_into(cur, module_bracket(m, nm, h, n), -f.one());
        if (cur.is_zero()) continue;
        CochainSpace xn(h, n, -1), yn(h, n, 0);
        SparseMatrix bn = assemble(xn, yn, module_terms(m, nm, h, n, n, -1), f);
        Vector rhs = yn.flatten(cur);
        auto sol = solve(bn, rhs);
        if (sol) {
            h.set(n, xn.unflatten(*sol));
            continue;
        }
        if (n == 1) throw Error(ErrorCode::ObstructionNonzero, "g_1 is not null-homotopic");
        CochainSpace xd(h, n - 1, -1), yd(h, n - 1, 0);
        SparseMatrix cd = assemble(xd, yd, module_terms(m, nm, h, n - 1, n - 1, -1), f);
        SparseMatrix ld = assemble(xd, yn, module_terms(m, nm, h, n - 1, n, -1), f);
        SparseMatrix sys =
            stack(f, {yd.dim(), yn.dim()}, {xd.dim(), xn.dim()}, {{0, 0, &cd}, {1, 0, &ld}, {1, 1, &bn}});
        auto sol2 = solve(sys, concat({zero_vector(f, yd.dim()), rhs}));
        if (!sol2)
            throw Error(ErrorCode::ObstructionNonzero,
                        "no null-homotopy at arity " + std::to_string(n) + ": the class does not vanish");
        SparseMatrix prev = h.component(n - 1);
        add_into(prev, xd.unflatten(slice(*sol2, 0, xd.dim())), f.one());
        h.set(n - 1, prev);
        h.set(n, xn.unflatten(slice(*sol2, xd.dim(), xn.dim())));
    }
    for (int n = 1; n <= N; ++n) {
        SparseMatrix diff = g.component(n);
        add_into(diff, module_bracket(m, nm, h, n), -f.one());
        if (!diff.is_zero()) throw Error(ErrorCode::Internal, "null-homotopy fails re-verification");
    }
    res.h = h;
    res.verified_to = N;
    return res;
}

// ---------------------------------------------------------------- module structures

GradedAlgebra endomorphism_algebra(Field f, const GradedSpace& m, const Matrix& d) {
    size_t n = m.dim(), e = n * n;
    if (d.rows() != n || d.cols() != n) throw Error(ErrorCode::DimensionMismatch, "differential has the wrong size");
    std::vector<std::string> names;
    std::vector<int> degrees;
    for (size_t r = 0; r < n; ++r)
        for (size_t c = 0; c < n; ++c) {
            names.push_back("E(" + m.names()[r] + "," + m.names()[c] + ")");
            degrees.push_back(m.degree(r) - m.degree(c));
        }
    Vector unit = zero_vector(f, e);
    for (size_t r = 0; r < n; ++r) unit[r * n + r] = f.one();
    std::vector<std::vector<Vector>> products(e, std::vector<Vector>(e, zero_vector(f, e)));
    for (size_t r = 0; r < n; ++r)
        for (size_t c = 0; c < n; ++c)
            for (size_t d2 = 0; d2 < n; ++d2) products[r * n + c][c * n + d2][r * n + d2] = f.one();
    Matrix de(f, e, e);
    for (size_t r = 0; r < n; ++r)
        for (size_t c = 0; c < n; ++c) {
            FieldElement s = -sign(f, degrees[r * n + c]);
            for (size_t r2 = 0; r2 < n; ++r2) de(r2 * n + c, r * n + c) += d(r2, r);
            for (size_t c2 = 0; c2 < n; ++c2) de(r * n + c2, r * n + c) += s * d(c, c2);
        }
    return GradedAlgebra(f, names, degrees, unit, products, de);
}

ModuleStructureResult lift_module_structure(const AInftyAlgebra& b, const GradedSpace& m, const Matrix& d,
                                            const std::vector<Matrix>& action, const LiftOptions& opt) {
    Field f = b.field();
    int N = opt.arity;
    check_budget(N, b.max_arity(), N);
    size_t dm = m.dim(), db = b.dim(), de = dm * dm;
    if (action.size() != db) throw Error(ErrorCode::DimensionMismatch, "one action matrix per basis element of B");
    GradedAlgebra E = endomorphism_algebra(f, m, d);
    AInftyAlgebra ea = AInftyAlgebra::from_dg(E, std::max(N, 2));

    // the cohomology action the structure has to induce
    AInftyModule bare = AInftyModule::from_dg(b, m, d, std::vector<Matrix>(db, Matrix(f, dm, dm)));
    auto hb = algebra_cohomology(b);
    auto hm = module_cohomology(bare);
    GradedAlgebra HB = cohomology_algebra(b, hb);
    size_t kb = hb.representatives.size(), km = hm.representatives.size();
    std::vector<Matrix> g;
    for (size_t i = 0; i < kb; ++i) {
        Matrix ai(f, dm, dm);
        for (size_t t = 0; t < db; ++t)
            if (!hb.representatives[i][t].is_zero()) ai = ai + hb.representatives[i][t] * action[t];
        Matrix gi(f, km, km);
        try {
            for (size_t c = 0; c < km; ++c)
                for (const auto& [r, v] : hm.project(to_sparse(ai.apply(hm.representatives[c])))) gi(r, c) = v;
            for (size_t j = 0; j < dm; ++j)
                if (!is_zero(hm.project(ai.apply(d.column(j)))))
                    throw Error(ErrorCode::NotCohomologyMultiplicative, "boundaries are not preserved");
        } catch (const Error& e) {
            if (e.code() == ErrorCode::NotCohomologyMultiplicative) throw;
            throw Error(ErrorCode::NotCohomologyMultiplicative,
                        "the action of " + hb.space.names()[i] + " does not preserve cocycles");
        }
        g.push_back(gi);
    }
    auto combine = [&](const Vector& coeffs) {
        Matrix s(f, km, km);
        for (size_t t = 0; t < kb; ++t)
            if (!coeffs[t].is_zero()) s = s + coeffs[t] * g[t];
        return s;
    };
    for (size_t i = 0; i < kb; ++i)
        for (size_t j = 0; j < kb; ++j)
            if (!(combine(HB.product(i, j)) == g[i] * g[j]))
                throw Error(ErrorCode::NotCohomologyMultiplicative, "the cohomology action is not multiplicative");
    if (!(combine(HB.unit()) == Matrix::identity(f, km)))
        throw Error(ErrorCode::NotCohomologyMultiplicative, "the unit does not act as the identity");

    ModuleStructureResult res;
    Matrix b1 = b.b().component(1).to_dense(), e1 = ea.b().component(1).to_dense();
    Matrix phi(f, de, db);
    bool homogeneous = true;
    for (size_t t = 0; t < db; ++t)
        for (size_t r = 0; r < dm; ++r)
            for (size_t c = 0; c < dm; ++c) {
                phi(r * dm + c, t) = action[t](r, c);
                if (!action[t](r, c).is_zero() && E.degree(r * dm + c) != b.space().degree(t)) homogeneous = false;
            }
    if (homogeneous && phi * b1 == e1 * phi) {
        res.given_action_used = true;
    } else {
        // unknowns: Phi(e_t) in degree |e_t|, then w_{i,c} in M
        std::vector<std::pair<size_t, size_t>> vars;  // (t, E index)
        for (size_t t = 0; t < db; ++t)
            for (size_t x = 0; x < de; ++x)
                if (E.degree(x) == b.space().degree(t)) vars.emplace_back(t, x);
        size_t nphi = vars.size(), nw = kb * km * dm, nv = nphi + nw;
        size_t neq = db * de + de + kb * km * dm;
        Matrix sys(f, neq, nv);
        Vector rhs = zero_vector(f, neq);
        for (size_t v = 0; v < nphi; ++v) {
            auto [t, x] = vars[v];
            // chain condition: Phi b1_B - b1_E Phi
            for (size_t s = 0; s < db; ++s)
                if (!b1(t, s).is_zero()) sys(s * de + x, v) += b1(t, s);
            for (size_t y = 0; y < de; ++y)
                if (!e1(y, x).is_zero()) sys(t * de + y, v) -= e1(y, x);
            // unit
            if (b.unit() && *b.unit() == t) sys(db * de + x, v) += f.one();
            // Phi(rep_i) rep_c
            size_t r = x / dm, col = x % dm;
            for (size_t i = 0; i < kb; ++i)
                for (size_t c = 0; c < km; ++c) {
                    FieldElement coef = hb.representatives[i][t] * hm.representatives[c][col];
                    if (!coef.is_zero()) sys(db * de + de + (i * km + c) * dm + r, v) += coef;
                }
        }
        if (b.unit())
            for (size_t r = 0; r < dm; ++r) rhs[db * de + r * dm + r] = f.one();
        Matrix dd = d;
        for (size_t i = 0; i < kb; ++i)
            for (size_t c = 0; c < km; ++c) {
                size_t base = db * de + de + (i * km + c) * dm;
                for (size_t row = 0; row < dm; ++row) {
                    for (size_t r = 0; r < km; ++r)
                        if (!g[i](r, c).is_zero()) rhs[base + row] += g[i](r, c) * hm.representatives[r][row];
                    for (size_t w = 0; w < dm; ++w)
                        if (!dd(row, w).is_zero()) sys(base + row, nphi + (i * km + c) * dm + w) -= dd(row, w);
                }
            }
        auto sol = solve(sys, rhs);
        if (!sol) throw Error(ErrorCode::NoChainLevelLift, "no chain map B -> End(M) induces the action");
        phi = Matrix(f, de, db);
        for (size_t v = 0; v < nphi; ++v) phi(vars[v].second, vars[v].first) = (*sol)[v];
    }
    res.chain_action = phi;
    res.lift = lift_algebra_morphism(b, ea, phi, opt);
    res.conditions = hh_condition(HB, cohomology_bimodule(b, ea, phi), LiftMode::lift_object, N);
    if (!res.lift.success) return res;

    TaylorMap bm(f, b.b().bar(), m, m, 1, N);
    bm.set_dense(1, d);
    for (int k = 1; k + 1 <= N; ++k) {
        const SparseMatrix* pk = res.lift.map.find(k);
        if (!pk) continue;
        SparseMatrix comp(f, dm, bm.source_size(k + 1));
        for (size_t col = 0; col < pk->cols(); ++col)
            for (const auto& [x, v] : pk->column(col)) comp.add(x / dm, col * dm + x % dm, v);
        bm.set(k + 1, std::move(comp));
    }
    AInftyModule mod(b, m, bm);
    if (!module_square(mod, N).empty()) throw Error(ErrorCode::Internal, "the induced module fails the A-infinity relations");
    res.module = mod;
    res.success = true;

    res.strictly_unital = false;
    if (b.unit()) {
        size_t u = *b.unit();
        bool ok = true;
        for (int k : bm.arities()) {
            if (k < 2) continue;
            const SparseMatrix& comp = *bm.find(k);
            for (size_t col = 0; col < comp.cols() && ok; ++col) {
                auto digits = bm.decode(k, col);
                bool has = std::find(digits.begin(), digits.end() - 1, u) != digits.end() - 1;
                if (!has) continue;
                if (k == 2)
                    ok = comp.column(col) == SparseVec{{digits[1], f.one()}};
                else
                    ok = comp.column(col).empty();
            }
        }
        res.strictly_unital = ok;
    }
    return res;
}

}  // namespace xl
