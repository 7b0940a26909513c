#include "exactlift/rep.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "exactlift/error.hpp"

namespace xl {

QuiverRep::QuiverRep(Quiver q, Field f, DimVector dims, std::vector<Matrix> mats)
    : q_(std::move(q)), f_(f), dims_(std::move(dims)), mats_(std::move(mats)) {
    if (int(dims_.size()) != q_.num_vertices())
        throw Error(ErrorCode::ShapeMismatch, "dimension vector length " + std::to_string(dims_.size()) +
                                                  " for " + std::to_string(q_.num_vertices()) + " vertices");
    for (long d : dims_)
        if (d < 0) throw Error(ErrorCode::ShapeMismatch, "negative dimension");
    if (int(mats_.size()) != q_.num_arrows())
        throw Error(ErrorCode::ShapeMismatch, std::to_string(mats_.size()) + " matrices for " +
                                                  std::to_string(q_.num_arrows()) + " arrows");
    for (int a = 0; a < q_.num_arrows(); ++a) {
        const Arrow& ar = q_.arrow(a);
        const Matrix& m = mats_[a];
        if (long(m.rows()) != dims_[ar.head] || long(m.cols()) != dims_[ar.tail])
            throw Error(ErrorCode::ShapeMismatch, "arrow '" + ar.id + "' needs a " + std::to_string(dims_[ar.head]) +
                                                      "x" + std::to_string(dims_[ar.tail]) + " matrix, got " +
                                                      std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
        if (m.rows() * m.cols() > 0 && !(m.field() == f_))
            throw Error(ErrorCode::DescriptorMismatch, "arrow '" + ar.id + "' matrix over " + m.field().to_string());
        if (!(m.field() == f_)) mats_[a] = Matrix(f_, m.rows(), m.cols());
    }
}

QuiverRep QuiverRep::zero(Quiver q, Field f, DimVector dims) {
    std::vector<Matrix> mats;
    for (const auto& a : q.arrows()) mats.emplace_back(f, size_t(dims.at(a.head)), size_t(dims.at(a.tail)));
    return QuiverRep(std::move(q), f, std::move(dims), std::move(mats));
}

QuiverRep QuiverRep::simple(Quiver q, Field f, int vertex) {
    DimVector d(q.num_vertices(), 0);
    d.at(vertex) = 1;
    return zero(std::move(q), f, d);
}

long QuiverRep::total_dim() const {
    long s = 0;
    for (long d : dims_) s += d;
    return s;
}

bool QuiverRep::operator==(const QuiverRep& o) const {
    return q_ == o.q_ && f_ == o.f_ && dims_ == o.dims_ && mats_ == o.mats_;
}

namespace {

void check_compatible(const QuiverRep& v, const QuiverRep& w) {
    if (!(v.quiver() == w.quiver())) throw Error(ErrorCode::QuiverMismatch, "representations of different quivers");
    if (!(v.field() == w.field()))
        throw Error(ErrorCode::DescriptorMismatch, v.field().to_string() + " vs " + w.field().to_string());
}

}  // namespace

bool is_morphism(const QuiverRep& v, const QuiverRep& w, const RepMorphism& f) {
    check_compatible(v, w);
    for (int a = 0; a < v.quiver().num_arrows(); ++a) {
        const Arrow& ar = v.quiver().arrow(a);
        if (!(f.maps[ar.head] * v.mat(a) == w.mat(a) * f.maps[ar.tail])) return false;
    }
    return true;
}

RepMorphism compose(const RepMorphism& g, const RepMorphism& f) {
    RepMorphism h;
    for (size_t i = 0; i < f.maps.size(); ++i) h.maps.push_back(g.maps[i] * f.maps[i]);
    return h;
}

Matrix intertwiner_defect_map(const QuiverRep& v, const QuiverRep& w) {
    check_compatible(v, w);
    const Quiver& q = v.quiver();
    Field f = v.field();
    std::vector<size_t> col_off(q.num_vertices() + 1, 0), row_off(q.num_arrows() + 1, 0);
    for (int i = 0; i < q.num_vertices(); ++i) col_off[i + 1] = col_off[i] + w.dim(i) * v.dim(i);
    for (int a = 0; a < q.num_arrows(); ++a)
        row_off[a + 1] = row_off[a] + w.dim(q.arrow(a).head) * v.dim(q.arrow(a).tail);
    Matrix phi(f, row_off.back(), col_off.back());
    for (int a = 0; a < q.num_arrows(); ++a) {
        const Arrow& ar = q.arrow(a);
        long nv = v.dim(ar.tail), nwh = w.dim(ar.head);
        // f_h V_a : unit E_rc at vertex h puts row c of V_a into row r
        for (long r = 0; r < nwh; ++r)
            for (long c = 0; c < v.dim(ar.head); ++c) {
                size_t col = col_off[ar.head] + r * v.dim(ar.head) + c;
                for (long k = 0; k < nv; ++k) {
                    const FieldElement& x = v.mat(a)(c, k);
                    if (!x.is_zero()) phi(row_off[a] + r * nv + k, col) += x;
                }
            }
        // - W_a f_t : unit E_rc at vertex t puts -column r of W_a into column c
        for (long r = 0; r < w.dim(ar.tail); ++r)
            for (long c = 0; c < nv; ++c) {
                size_t col = col_off[ar.tail] + r * nv + c;
                for (long k = 0; k < nwh; ++k) {
                    const FieldElement& x = w.mat(a)(k, r);
                    if (!x.is_zero()) phi(row_off[a] + k * nv + c, col) -= x;
                }
            }
    }
    return phi;
}

HomSpace hom_space(const QuiverRep& v, const QuiverRep& w) {
    SubspaceBasis k = kernel_basis(intertwiner_defect_map(v, w));
    HomSpace h;
    h.dim = k.dim();
    const Quiver& q = v.quiver();
    for (const auto& vec : k.vectors()) {
        RepMorphism m;
        size_t off = 0;
        for (int i = 0; i < q.num_vertices(); ++i) {
            Matrix fi(v.field(), w.dim(i), v.dim(i));
            for (long r = 0; r < w.dim(i); ++r)
                for (long c = 0; c < v.dim(i); ++c) fi(r, c) = vec[off++];
            m.maps.push_back(std::move(fi));
        }
        h.basis.push_back(std::move(m));
    }
    return h;
}

ExtSpace::ExtSpace(const QuiverRep& v, const QuiverRep& w)
    : f_(v.field()), quotient_(intertwiner_defect_map(v, w)) {
    for (const auto& ar : v.quiver().arrows()) shapes_.push_back({size_t(w.dim(ar.head)), size_t(v.dim(ar.tail))});
}

Vector ExtSpace::flatten(const std::vector<Matrix>& cochain) const {
    if (cochain.size() != shapes_.size()) throw Error(ErrorCode::ShapeMismatch, "cochain has wrong arrow count");
    Vector out;
    for (size_t a = 0; a < shapes_.size(); ++a) {
        if (cochain[a].rows() != shapes_[a].first || cochain[a].cols() != shapes_[a].second)
            throw Error(ErrorCode::ShapeMismatch, "cochain block shape");
        for (size_t r = 0; r < shapes_[a].first; ++r)
            for (size_t c = 0; c < shapes_[a].second; ++c) out.push_back(cochain[a](r, c));
    }
    return out;
}

std::vector<Matrix> ExtSpace::unflatten(const Vector& v) const {
    std::vector<Matrix> out;
    size_t off = 0;
    for (const auto& [nr, nc] : shapes_) {
        Matrix m(f_, nr, nc);
        for (size_t r = 0; r < nr; ++r)
            for (size_t c = 0; c < nc; ++c) m(r, c) = v.at(off++);
        out.push_back(std::move(m));
    }
    return out;
}

std::vector<Matrix> ExtSpace::representative(size_t k) const { return unflatten(quotient_.representative(k)); }

Vector ExtSpace::coordinates(const std::vector<Matrix>& cochain) const {
    return quotient_.coordinates(flatten(cochain));
}

ExtSpace ext_space(const QuiverRep& v, const QuiverRep& w) { return ExtSpace(v, w); }

bool is_schur(const QuiverRep& v) { return hom_space(v, v).dim == 1; }

bool perp_check(const QuiverRep& w, const QuiverRep& v) {
    return hom_space(w, v).dim == 0 && ext_space(w, v).dim() == 0;
}

bool semistable_witness_check(const QuiverRep& w, const QuiverRep& v, const Weight& lambda) {
    check_compatible(w, v);
    if (dot(lambda, v.dims()) != 0)
        throw Error(ErrorCode::WeightNotOrthogonal,
                    "lambda " + format_vector(lambda) + " is not orthogonal to " + format_vector(v.dims()));
    if (w.total_dim() == 0) return false;
    bool lambda_zero = std::all_of(lambda.begin(), lambda.end(), [](long x) { return x == 0; });
    if (lambda_zero) return false;
    std::vector<long> c = codim_vector(w.quiver(), w.dims());
    // c = t * lambda with t < 0: pick a nonzero coordinate of lambda
    size_t j = 0;
    while (lambda[j] == 0) ++j;
    mpq_class t(c[j], lambda[j]);
    t.canonicalize();
    if (t >= 0) return false;
    for (size_t i = 0; i < c.size(); ++i)
        if (mpq_class(c[i]) != t * lambda[i]) return false;
    return perp_check(w, v);
}

std::string to_string(StabilityVerdict v) {
    switch (v) {
        case StabilityVerdict::stable: return "stable";
        case StabilityVerdict::strictly_semistable: return "strictly_semistable";
        case StabilityVerdict::unstable: return "unstable";
    }
    return "?";
}

namespace {

uint64_t saturating_mul(uint64_t a, uint64_t b) {
    unsigned __int128 r = (unsigned __int128)a * b;
    return r > UINT64_MAX ? UINT64_MAX : uint64_t(r);
}

// number of subspaces of F_q^n (sum of Gaussian binomials)
uint64_t count_subspaces(long n, uint64_t q) {
    // Gaussian binomials [m j]_q = [m-1 j-1]_q + q^j [m-1 j]_q
    std::vector<std::vector<uint64_t>> g(n + 1, std::vector<uint64_t>(n + 1, 0));
    auto add = [](uint64_t a, uint64_t b) { return a + b < a ? UINT64_MAX : a + b; };
    for (long m = 0; m <= n; ++m) {
        g[m][0] = 1;
        uint64_t qp = 1;
        for (long j = 1; j <= m; ++j) {
            qp = saturating_mul(qp, q);
            g[m][j] = add(g[m - 1][j - 1], saturating_mul(qp, g[m - 1][j]));
        }
    }
    uint64_t total = 0;
    for (long k = 0; k <= n; ++k) total = add(total, g[n][k]);
    return total;
}

// all k-dimensional subspaces of F^n as reduced echelon k x n matrices, in
// lexicographic order of (pivot set, free entries)
std::vector<Matrix> subspaces_of_dim(Field f, long n, long k) {
    std::vector<Matrix> out;
    uint64_t p = f.characteristic();
    std::vector<long> piv(k);
    std::function<void(long, long)> choose = [&](long idx, long start) {
        if (idx == k) {
            std::vector<std::pair<long, long>> free;
            std::vector<bool> is_piv(n, false);
            for (long c : piv) is_piv[c] = true;
            for (long r = 0; r < k; ++r)
                for (long c = piv[r] + 1; c < n; ++c)
                    if (!is_piv[c]) free.push_back({r, c});
            std::vector<uint64_t> digits(free.size(), 0);
            for (;;) {
                Matrix m(f, k, n);
                for (long r = 0; r < k; ++r) m(r, piv[r]) = f.one();
                for (size_t t = 0; t < free.size(); ++t) m(free[t].first, free[t].second) = f.from_int(long(digits[t]));
                out.push_back(std::move(m));
                size_t t = free.size();
                while (t > 0 && ++digits[t - 1] == p) digits[--t] = 0;
                if (t == 0) break;
            }
            return;
        }
        for (long c = start; c < n; ++c) {
            piv[idx] = c;
            choose(idx + 1, c + 1);
        }
    };
    choose(0, 0);
    return out;
}

bool in_rowspace(const Matrix& b, const Vector& w) {
    Vector r = w;
    for (size_t i = 0; i < b.rows(); ++i) {
        size_t pc = 0;
        while (b(i, pc).is_zero()) ++pc;
        FieldElement c = r[pc];
        if (!c.is_zero())
            for (size_t j = 0; j < b.cols(); ++j) r[j] -= c * b(i, j);
    }
    return is_zero(r);
}

}  // namespace

uint64_t stability_enumeration_cost(const QuiverRep& v) {
    if (!v.field().is_finite()) throw Error(ErrorCode::NotFiniteField, "enumeration needs a prime field");
    uint64_t cost = 1;
    for (long d : v.dims()) cost = saturating_mul(cost, count_subspaces(d, v.field().characteristic()));
    return cost;
}

StabilityResult stability_bruteforce(const QuiverRep& v, const Weight& lambda, uint64_t budget) {
    if (!v.field().is_finite())
        throw Error(ErrorCode::NotFiniteField, "stability oracle over " + v.field().to_string());
    const Quiver& q = v.quiver();
    if (int(lambda.size()) != q.num_vertices()) throw Error(ErrorCode::ShapeMismatch, "weight length");
    uint64_t cost = stability_enumeration_cost(v);
    if (cost > budget)
        throw Error(ErrorCode::BudgetExceeded,
                    std::to_string(cost) + " subspace tuples exceed the budget " + std::to_string(budget));
    Field f = v.field();
    int n = q.num_vertices();
    // subs[i][k] = k-dimensional subspaces at vertex i
    std::vector<std::vector<std::vector<Matrix>>> subs(n);
    for (int i = 0; i < n; ++i)
        for (long k = 0; k <= v.dim(i); ++k) subs[i].push_back(subspaces_of_dim(f, v.dim(i), k));

    long la = dot(lambda, v.dims());
    StabilityResult res{StabilityVerdict::stable, 0, std::nullopt};
    long total = v.total_dim();
    DimVector beta(n, 0);
    std::vector<const Matrix*> chosen(n, nullptr);
    bool stop = false;

    auto closed = [&]() {
        for (int a = 0; a < q.num_arrows(); ++a) {
            const Arrow& ar = q.arrow(a);
            const Matrix& bt = *chosen[ar.tail];
            const Matrix& bh = *chosen[ar.head];
            for (size_t r = 0; r < bt.rows(); ++r) {
                Vector img = v.mat(a).apply(bt.row(r));
                if (!in_rowspace(bh, img)) return false;
            }
        }
        return true;
    };

    std::function<void(int)> pick = [&](int i) {
        if (stop) return;
        if (i == n) {
            ++res.subreps_examined;
            if (!closed()) return;
            long lb = dot(lambda, beta);
            if (lb < la) {
                res.verdict = StabilityVerdict::unstable;
                res.witness = beta;
                stop = true;
            } else if (lb == la && res.verdict == StabilityVerdict::stable) {
                res.verdict = StabilityVerdict::strictly_semistable;
                res.witness = beta;
            }
            return;
        }
        for (const auto& m : subs[i][beta[i]]) {
            chosen[i] = &m;
            pick(i + 1);
            if (stop) return;
        }
    };

    // dimension vectors of total dimension D in lexicographic order
    std::function<void(int, long)> dims = [&](int i, long rest) {
        if (stop) return;
        if (i == n - 1) {
            if (rest > v.dim(i)) return;
            beta[i] = rest;
            pick(0);
            return;
        }
        for (long k = 0; k <= std::min(rest, v.dim(i)) && !stop; ++k) {
            beta[i] = k;
            dims(i + 1, rest - k);
        }
    };
    for (long d = 1; d < total && !stop; ++d) dims(0, d);
    return res;
}

QuiverRep specialize(const QuiverRep& v, const std::vector<FieldElement>& point) {
    if (!v.field().is_function_field()) throw Error(ErrorCode::InvalidArgument, "specialize needs a function field");
    Field target = point.empty() ? v.field().base() : point[0].field();
    std::vector<Matrix> mats;
    for (const auto& m : v.mats()) {
        Matrix s(target, m.rows(), m.cols());
        for (size_t r = 0; r < m.rows(); ++r)
            for (size_t c = 0; c < m.cols(); ++c) s(r, c) = m(r, c).evaluate(point);
        mats.push_back(std::move(s));
    }
    return QuiverRep(v.quiver(), target, v.dims(), std::move(mats));
}

QuiverRep extend_scalars(const QuiverRep& v, Field target) {
    if (v.field() == target) return v;
    if (!target.is_function_field() || !(target.base() == v.field()))
        throw Error(ErrorCode::DescriptorMismatch, "cannot extend " + v.field().to_string() + " to " + target.to_string());
    std::vector<Matrix> mats;
    for (const auto& m : v.mats()) {
        Matrix s(target, m.rows(), m.cols());
        for (size_t r = 0; r < m.rows(); ++r)
            for (size_t c = 0; c < m.cols(); ++c) s(r, c) = target.from_rational(m(r, c).value());
        mats.push_back(std::move(s));
    }
    return QuiverRep(v.quiver(), target, v.dims(), std::move(mats));
}

QuiverRep direct_sum(const QuiverRep& a, const QuiverRep& b) {
    check_compatible(a, b);
    DimVector d(a.dims().size());
    for (size_t i = 0; i < d.size(); ++i) d[i] = a.dims()[i] + b.dims()[i];
    std::vector<Matrix> mats;
    for (int k = 0; k < a.quiver().num_arrows(); ++k) {
        Matrix m(a.field(), a.mat(k).rows() + b.mat(k).rows(), a.mat(k).cols() + b.mat(k).cols());
        m.set_block(0, 0, a.mat(k));
        m.set_block(a.mat(k).rows(), a.mat(k).cols(), b.mat(k));
        mats.push_back(std::move(m));
    }
    return QuiverRep(a.quiver(), a.field(), d, std::move(mats));
}

QuiverRep transport(const QuiverRep& v, const std::vector<Matrix>& g) {
    std::vector<Matrix> mats;
    for (int a = 0; a < v.quiver().num_arrows(); ++a) {
        const Arrow& ar = v.quiver().arrow(a);
        Rref inv = rref(g[ar.tail].augment(Matrix::identity(v.field(), g[ar.tail].rows())));
        if (inv.pivots.size() != g[ar.tail].rows() || (!inv.pivots.empty() && inv.pivots.back() >= g[ar.tail].cols()))
            throw Error(ErrorCode::InvalidArgument, "base change is not invertible");
        Matrix ginv = inv.r.block(0, g[ar.tail].cols(), g[ar.tail].rows(), g[ar.tail].rows());
        mats.push_back(g[ar.head] * v.mat(a) * ginv);
    }
    return QuiverRep(v.quiver(), v.field(), v.dims(), std::move(mats));
}

std::vector<std::vector<int>> paths_from(const Quiver& q, int i) {
    if (!q.is_acyclic())
        throw Error(ErrorCode::InvalidArgument, "projectives are only materialized for acyclic quivers");
    std::vector<std::vector<int>> out;
    std::deque<std::pair<std::vector<int>, int>> queue{{{}, i}};
    while (!queue.empty()) {
        auto [p, end] = queue.front();
        queue.pop_front();
        out.push_back(p);
        for (int a = 0; a < q.num_arrows(); ++a)
            if (q.arrow(a).tail == end) {
                auto np = p;
                np.push_back(a);
                queue.push_back({np, q.arrow(a).head});
            }
    }
    return out;
}

namespace {

int path_end(const Quiver& q, int start, const std::vector<int>& p) { return p.empty() ? start : q.arrow(p.back()).head; }

// position of each path within its end vertex's basis
std::vector<std::vector<std::vector<int>>> paths_by_end(const Quiver& q, int i) {
    std::vector<std::vector<std::vector<int>>> by(q.num_vertices());
    for (auto& p : paths_from(q, i)) by[path_end(q, i, p)].push_back(p);
    return by;
}

long index_of(const std::vector<std::vector<int>>& list, const std::vector<int>& p) {
    auto it = std::find(list.begin(), list.end(), p);
    if (it == list.end()) throw Error(ErrorCode::Internal, "path not found");
    return long(it - list.begin());
}

}  // namespace

QuiverRep projective(const Quiver& q, Field f, int i) {
    auto by = paths_by_end(q, i);
    DimVector d;
    for (auto& l : by) d.push_back(long(l.size()));
    std::vector<Matrix> mats;
    for (int a = 0; a < q.num_arrows(); ++a) {
        const Arrow& ar = q.arrow(a);
        Matrix m(f, d[ar.head], d[ar.tail]);
        for (size_t c = 0; c < by[ar.tail].size(); ++c) {
            auto p = by[ar.tail][c];
            p.push_back(a);
            m(index_of(by[ar.head], p), c) = f.one();
        }
        mats.push_back(std::move(m));
    }
    return QuiverRep(q, f, d, std::move(mats));
}

RepMorphism path_morphism(const Quiver& q, Field f, int j, int i, const std::vector<int>& path) {
    if (path_end(q, i, path) != j || (!path.empty() && q.arrow(path.front()).tail != i))
        throw Error(ErrorCode::InvalidArgument, "path does not run from the target vertex to the source vertex");
    for (size_t k = 1; k < path.size(); ++k)
        if (q.arrow(path[k]).tail != q.arrow(path[k - 1]).head) throw Error(ErrorCode::InvalidArgument, "broken path");
    auto src = paths_by_end(q, j), dst = paths_by_end(q, i);
    RepMorphism m;
    for (int v = 0; v < q.num_vertices(); ++v) {
        Matrix mv(f, dst[v].size(), src[v].size());
        for (size_t c = 0; c < src[v].size(); ++c) {
            auto p = path;
            p.insert(p.end(), src[v][c].begin(), src[v][c].end());
            mv(index_of(dst[v], p), c) = f.one();
        }
        m.maps.push_back(std::move(mv));
    }
    return m;
}

QuiverRep cokernel(const QuiverRep& source, const QuiverRep& target, const RepMorphism& f) {
    check_compatible(source, target);
    if (!is_morphism(source, target, f)) throw Error(ErrorCode::InvalidArgument, "cokernel of a non-morphism");
    const Quiver& q = target.quiver();
    std::vector<Quotient> quo;
    DimVector d;
    for (int i = 0; i < q.num_vertices(); ++i) {
        quo.emplace_back(f.maps[i]);
        d.push_back(long(quo.back().dim()));
    }
    std::vector<Matrix> mats;
    for (int a = 0; a < q.num_arrows(); ++a) {
        const Arrow& ar = q.arrow(a);
        Matrix m(target.field(), d[ar.head], d[ar.tail]);
        for (long c = 0; c < d[ar.tail]; ++c) {
            Vector img = target.mat(a).apply(quo[ar.tail].representative(c));
            Vector coords = quo[ar.head].coordinates(img);
            for (long r = 0; r < d[ar.head]; ++r) m(r, c) = coords[r];
        }
        mats.push_back(std::move(m));
    }
    return QuiverRep(q, target.field(), d, std::move(mats));
}

}  // namespace xl
