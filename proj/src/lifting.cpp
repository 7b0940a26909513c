#include "exactlift/lifting.hpp"

#include "exactlift/error.hpp"
#include "exactlift/examples.hpp"

namespace xl {

namespace {

Field require_function_field(const QuiverRep& u) {
    Field l = u.field();
    if (!l.is_function_field()) throw Error(ErrorCode::InvalidArgument, "field actions need a function field k(x1..xd)");
    return l;
}

RepMorphism scalar_morphism(const QuiverRep& r, const FieldElement& c) {
    RepMorphism m;
    for (int i = 0; i < r.quiver().num_vertices(); ++i)
        m.maps.push_back(c * Matrix::identity(r.field(), size_t(r.dim(i))));
    return m;
}

bool same_maps(const RepMorphism& a, const RepMorphism& b) {
    if (a.maps.size() != b.maps.size()) return false;
    for (size_t i = 0; i < a.maps.size(); ++i)
        if (!(a.maps[i] == b.maps[i])) return false;
    return true;
}

std::vector<Matrix> cochain_from_coords(const ExtSpace& ext, const Vector& c, Field f) {
    Vector flat = zero_vector(f, ext.cochain_dim());
    for (size_t k = 0; k < c.size(); ++k)
        if (!c[k].is_zero()) flat = flat + c[k] * ext.flatten(ext.representative(k));
    return ext.unflatten(flat);
}

Vector flatten_morphism(const RepMorphism& m) {
    Vector v;
    for (const auto& b : m.maps)
        for (size_t r = 0; r < b.rows(); ++r)
            for (size_t c = 0; c < b.cols(); ++c) v.push_back(b(r, c));
    return v;
}

RepMorphism unflatten_morphism(const QuiverRep& u, const QuiverRep& v, const Vector& x) {
    RepMorphism m;
    size_t k = 0;
    for (int i = 0; i < u.quiver().num_vertices(); ++i) {
        Matrix b(u.field(), size_t(v.dim(i)), size_t(u.dim(i)));
        for (size_t r = 0; r < b.rows(); ++r)
            for (size_t c = 0; c < b.cols(); ++c) b(r, c) = x.at(k++);
        m.maps.push_back(std::move(b));
    }
    return m;
}

Matrix stacked_deltas(const KoszulBimodule& m) {
    size_t e = m.dim();
    Matrix a(m.field(), size_t(m.d()) * e, e);
    for (int i = 0; i < m.d(); ++i) a.set_block(size_t(i) * e, 0, m.delta(i));
    return a;
}

Vector stacked(const std::vector<Vector>& phi) {
    Vector out;
    for (const auto& v : phi) out.insert(out.end(), v.begin(), v.end());
    return out;
}

Matrix with_column(const Matrix& a, const Vector& b) {
    return a.augment(Matrix::from_columns(a.field(), {b}, a.rows()));
}

}  // namespace

FieldActions scalar_actions(const QuiverRep& u, const QuiverRep& v) {
    Field l = require_function_field(u);
    if (v.field() != l) throw Error(ErrorCode::DescriptorMismatch, "U and V over different fields");
    FieldActions a;
    for (int i = 0; i < l.nvars(); ++i) {
        a.on_u.push_back(scalar_morphism(u, l.variable(i)));
        a.on_v.push_back(scalar_morphism(v, l.variable(i)));
    }
    return a;
}

void validate_actions(const QuiverRep& u, const QuiverRep& v, const FieldActions& a) {
    Field l = require_function_field(u);
    size_t d = size_t(l.nvars());
    if (a.on_u.size() != d || a.on_v.size() != d)
        throw Error(ErrorCode::DimensionMismatch, "need one action per field generator");
    for (const auto* side : {&a.on_u, &a.on_v}) {
        const QuiverRep& r = side == &a.on_u ? u : v;
        for (const auto& m : *side)
            if (!is_morphism(r, r, m)) throw Error(ErrorCode::NotAHomomorphism, "field action is not an endomorphism");
        for (size_t i = 0; i < d; ++i)
            for (size_t j = i + 1; j < d; ++j)
                if (!same_maps(compose((*side)[i], (*side)[j]), compose((*side)[j], (*side)[i])))
                    throw Error(ErrorCode::NonCommutingOperators, "field actions do not commute");
    }
}

ExtBimodule ext_bimodule(const QuiverRep& u, const QuiverRep& v) { return ext_bimodule(u, v, scalar_actions(u, v)); }

ExtBimodule ext_bimodule(const QuiverRep& u, const QuiverRep& v, const FieldActions& a) {
    validate_actions(u, v, a);
    Field l = u.field();
    ExtSpace ext(u, v);
    size_t e = ext.dim();
    const Quiver& q = u.quiver();
    std::vector<Matrix> post, pre, delta;
    for (size_t i = 0; i < a.on_u.size(); ++i) {
        Matrix po(l, e, e), pr(l, e, e);
        for (size_t k = 0; k < e; ++k) {
            auto xi = ext.representative(k);
            std::vector<Matrix> after, before;
            for (int ar = 0; ar < q.num_arrows(); ++ar) {
                const Arrow& arrow = q.arrow(ar);
                after.push_back(a.on_v[i].maps[size_t(arrow.head)] * xi[size_t(ar)]);
                before.push_back(xi[size_t(ar)] * a.on_u[i].maps[size_t(arrow.tail)]);
            }
            Vector cpo = ext.coordinates(after), cpr = ext.coordinates(before);
            for (size_t r = 0; r < e; ++r) po(r, k) = cpo[r], pr(r, k) = cpr[r];
        }
        delta.push_back(po - pr);
        post.push_back(std::move(po));
        pre.push_back(std::move(pr));
    }
    KoszulBimodule kz(l, e, std::move(delta));
    return ExtBimodule{std::move(ext), std::move(post), std::move(pre), std::move(kz)};
}

HomBimodule hom_bimodule(const QuiverRep& u, const QuiverRep& v, const FieldActions& a) {
    validate_actions(u, v, a);
    Field l = u.field();
    HomSpace h = hom_space(u, v);
    size_t ambient = 0;
    for (int i = 0; i < u.quiver().num_vertices(); ++i) ambient += size_t(u.dim(i) * v.dim(i));
    std::vector<Vector> gens;
    for (const auto& m : h.basis) gens.push_back(flatten_morphism(m));
    SubspaceBasis span = SubspaceBasis::span(l, ambient, gens);
    size_t n = span.dim();
    std::vector<Matrix> delta;
    for (size_t i = 0; i < a.on_u.size(); ++i) {
        Matrix di(l, n, n);
        for (size_t k = 0; k < n; ++k) {
            RepMorphism f = unflatten_morphism(u, v, span.vectors()[k]);
            Vector w = flatten_morphism(compose(a.on_v[i], f)) - flatten_morphism(compose(f, a.on_u[i]));
            auto c = span.coordinates(w);
            if (!c) throw Error(ErrorCode::Internal, "field action leaves Hom");
            for (size_t r = 0; r < n; ++r) di(r, k) = (*c)[r];
        }
        delta.push_back(std::move(di));
    }
    KoszulBimodule kz(l, n, std::move(delta));
    return HomBimodule{std::move(span), std::move(kz)};
}

TwoStepObject::TwoStepObject(QuiverRep u, QuiverRep v, std::vector<Vector> phi21, std::optional<FieldActions> actions)
    : u_(std::move(u)), v_(std::move(v)), phi21_(std::move(phi21)),
      actions_(actions ? std::move(*actions) : scalar_actions(u_, v_)), scalar_(!actions),
      ext_(ext_bimodule(u_, v_, actions_)) {
    if (!(u_.quiver() == v_.quiver())) throw Error(ErrorCode::QuiverMismatch, "U and V on different quivers");
    const auto& m = ext_.koszul;
    if (phi21_.size() != size_t(m.d())) throw Error(ErrorCode::DimensionMismatch, "phi21 needs one value per generator");
    for (const auto& p : phi21_)
        if (p.size() != m.dim()) throw Error(ErrorCode::DimensionMismatch, "phi21 value has wrong length");
    if (!derivation_check(m, phi21_)) throw Error(ErrorCode::NotADerivation, "phi21 fails delta_i(e_j) = delta_j(e_i)");
}

std::string to_string(LiftVerdict v) { return v == LiftVerdict::lifts ? "lifts" : "obstructed"; }

LiftCertificate lift_test(const TwoStepObject& z) {
    const ExtBimodule& eb = z.bimodule();
    const KoszulBimodule& m = eb.koszul;
    Field l = m.field();
    LiftCertificate c;
    Matrix a = stacked_deltas(m);
    Vector rhs = stacked(z.phi21());
    c.coboundary_rank = rank(a);
    c.augmented_rank = rank(with_column(a, rhs));
    if (c.augmented_rank == c.coboundary_rank) {
        auto w = is_inner(m, z.phi21());
        if (!w) throw Error(ErrorCode::Internal, "rank test and solve disagree");
        c.verdict = LiftVerdict::lifts;
        c.witness = *w;
        c.unit = UnitPi{l.one(), l.one(), *w};
        if (rederive_phi21(eb, *c.unit) != z.phi21()) throw Error(ErrorCode::Internal, "unit does not reproduce phi21");
        return c;
    }
    c.verdict = LiftVerdict::obstructed;
    CohomologyReport h1 = koszul_hh(m, 1, true);
    c.hh1_basis = h1.representatives;
    SparseEchelon ech(l, true);
    for (size_t k = 0; k < h1.d_in.cols(); ++k) ech.insert(h1.d_in.column(k));
    for (const auto& r : c.hh1_basis) ech.insert(to_sparse(r));
    auto combo = ech.express(to_sparse(rhs));
    if (!combo) throw Error(ErrorCode::Internal, "cocycle outside cocycles + coboundaries");
    c.class_coordinates = zero_vector(l, c.hh1_basis.size());
    size_t offset = h1.d_in.cols();
    for (const auto& [k, x] : *combo)
        if (k >= offset) c.class_coordinates[k - offset] = x;
    return c;
}

std::vector<Vector> rederive_phi21(const ExtBimodule& e, const UnitPi& pi) {
    std::vector<Vector> out;
    FieldElement inv22 = pi.pi22.inv(), inv11 = pi.pi11.inv();
    for (size_t i = 0; i < e.post.size(); ++i) {
        Vector t1 = (inv22 * inv11 * pi.pi11) * e.pre[i].apply(pi.pi21);
        Vector t2 = inv22 * e.post[i].apply(pi.pi21);
        out.push_back(t2 - t1);
    }
    return out;
}

bool verify_certificate(const TwoStepObject& z, const LiftCertificate& c) {
    const ExtBimodule& eb = z.bimodule();
    const KoszulBimodule& m = eb.koszul;
    if (!derivation_check(m, z.phi21())) return false;
    Matrix a = stacked_deltas(m);
    Vector rhs = stacked(z.phi21());
    if (rank(a) != c.coboundary_rank || rank(with_column(a, rhs)) != c.augmented_rank) return false;
    if (c.verdict == LiftVerdict::lifts) {
        if (!c.witness || !c.unit || c.augmented_rank != c.coboundary_rank) return false;
        for (int i = 0; i < m.d(); ++i)
            if (m.delta(i).apply(*c.witness) != z.phi21()[size_t(i)]) return false;
        return rederive_phi21(eb, *c.unit) == z.phi21();
    }
    if (c.augmented_rank != c.coboundary_rank + 1 || is_zero(c.class_coordinates)) return false;
    Matrix d1 = koszul_differential(m, 1);
    Vector residual = rhs;
    for (size_t k = 0; k < c.hh1_basis.size(); ++k) {
        if (!is_zero(d1.apply(c.hh1_basis[k]))) return false;
        residual = residual - c.class_coordinates[k] * c.hh1_basis[k];
    }
    // what is left of phi21 must be a coboundary
    return solve(a, residual).has_value();
}

namespace {

TwoStepObject counterexample(const QuiverRep& u) {
    // a nonzero constant assignment: phi21(x) = first Ext^1 representative, phi21(y) = phi21(z) = 0
    ExtSpace ext(u, u);
    Field l = u.field();
    if (ext.dim() == 0) throw Error(ErrorCode::Internal, "counterexample needs Ext^1 != 0");
    std::vector<Vector> phi(size_t(l.nvars()), zero_vector(l, ext.dim()));
    phi[0][0] = l.one();
    return TwoStepObject(u, u, phi);
}

}  // namespace

TwoStepObject build_counterexample_threeloop() { return counterexample(threeloop_generic(generic_point_field())); }

TwoStepObject build_counterexample_kronecker4() { return counterexample(kronecker_generic(generic_point_field())); }

SummandReport summand_class_check(const TwoStepObject& z, const TwoStepObject& zp) {
    if (!(z.u().quiver() == zp.u().quiver())) throw Error(ErrorCode::QuiverMismatch, "objects on different quivers");
    if (z.u().field() != zp.u().field()) throw Error(ErrorCode::DescriptorMismatch, "objects over different fields");
    Field l = z.u().field();
    QuiverRep u = direct_sum(z.u(), zp.u()), v = direct_sum(z.v(), zp.v());
    const Quiver& q = u.quiver();

    std::optional<FieldActions> actions;
    if (!z.scalar() || !zp.scalar()) {
        FieldActions a;
        auto block = [&](const RepMorphism& x, const RepMorphism& y) {
            RepMorphism out;
            for (size_t i = 0; i < x.maps.size(); ++i) {
                Matrix m(l, x.maps[i].rows() + y.maps[i].rows(), x.maps[i].cols() + y.maps[i].cols());
                m.set_block(0, 0, x.maps[i]);
                m.set_block(x.maps[i].rows(), x.maps[i].cols(), y.maps[i]);
                out.maps.push_back(std::move(m));
            }
            return out;
        };
        for (size_t i = 0; i < z.actions().on_u.size(); ++i) {
            a.on_u.push_back(block(z.actions().on_u[i], zp.actions().on_u[i]));
            a.on_v.push_back(block(z.actions().on_v[i], zp.actions().on_v[i]));
        }
        actions = std::move(a);
    }

    ExtSpace big(u, v);
    std::vector<Vector> phi;
    for (size_t i = 0; i < z.phi21().size(); ++i) {
        auto x = cochain_from_coords(z.bimodule().ext, z.phi21()[i], l);
        auto y = cochain_from_coords(zp.bimodule().ext, zp.phi21()[i], l);
        std::vector<Matrix> c;
        for (int ar = 0; ar < q.num_arrows(); ++ar) {
            const Arrow& arrow = q.arrow(ar);
            Matrix m(l, size_t(v.dim(arrow.head)), size_t(u.dim(arrow.tail)));
            m.set_block(0, 0, x[size_t(ar)]);
            m.set_block(size_t(z.v().dim(arrow.head)), size_t(z.u().dim(arrow.tail)), y[size_t(ar)]);
            c.push_back(std::move(m));
        }
        phi.push_back(big.coordinates(c));
    }
    TwoStepObject combined(u, v, phi, actions);

    SummandReport r;
    r.first_inner = lift_test(z).verdict == LiftVerdict::lifts;
    r.second_inner = lift_test(zp).verdict == LiftVerdict::lifts;
    r.combined_inner = lift_test(combined).verdict == LiftVerdict::lifts;
    r.holds = r.combined_inner == (r.first_inner && r.second_inner);
    return r;
}

ExtHomRankReport ext_hom_rank_check(const QuiverRep& u, const QuiverRep& v) {
    return ext_hom_rank_check(u, v, scalar_actions(u, v));
}

ExtHomRankReport ext_hom_rank_check(const QuiverRep& u, const QuiverRep& v, const FieldActions& a) {
    ExtBimodule eb = ext_bimodule(u, v, a);
    HomBimodule hb = hom_bimodule(u, v, a);
    ExtHomRankReport rep;
    rep.d = eb.koszul.d();
    rep.ext_dim = eb.koszul.dim();
    rep.hom_dim = hb.koszul.dim();
    auto hh = [&](const KoszulBimodule& m, int n) -> size_t { return n <= m.d() ? koszul_hh(m, n).rank : 0; };
    rep.pass = true;
    for (int i = 0; i <= std::max(rep.d, 3); ++i) {
        ExtHomRankRow row;
        row.i = i;
        row.ext_rank = hh(eb.koszul, 1 + i);
        row.hom_rank = hh(hb.koszul, 3 + i);
        row.equal = row.ext_rank == row.hom_rank;
        rep.pass = rep.pass && row.equal;
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace xl
