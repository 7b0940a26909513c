#include "exactlift/ainfty.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "exactlift/error.hpp"
#include "ainfty_detail.hpp"

namespace xl {

using detail::add_into;
using detail::Builder;
using detail::sign;

namespace {

size_t checked_pow(size_t base, int n) {
    size_t limit = size_t(default_budgets().enumeration) * 64;
    size_t r = 1;
    for (int i = 0; i < n; ++i) {
        if (base != 0 && r > limit / base)
            throw Error(ErrorCode::BudgetExceeded, "tensor power too large to enumerate");
        r *= base;
    }
    return r;
}

// mixed radix: n - 1 bar digits then one slot of radix `last`, or n bar digits
struct Radix {
    size_t bar;
    std::optional<size_t> last;
    size_t size(int n) const {
        if (n < 1) return 1;
        return last ? checked_pow(bar, n - 1) * *last : checked_pow(bar, n);
    }
};

std::vector<int> shift_degrees(const std::vector<int>& d, int by) {
    std::vector<int> out(d);
    for (auto& x : out) x += by;
    return out;
}

GradedSpace desuspended(const GradedSpace& s) {
    std::vector<std::string> names;
    for (const auto& n : s.names()) names.push_back(n.size() > 1 && n[0] == 's' ? n.substr(1) : "s^-1" + n);
    return GradedSpace(names, shift_degrees(s.degrees(), 1));
}

bool same_degrees(const GradedSpace& a, const GradedSpace& b) { return a.degrees() == b.degrees(); }

}  // namespace

// ---------------------------------------------------------------- GradedSpace

GradedSpace::GradedSpace(std::vector<std::string> names, std::vector<int> degrees)
    : names_(std::move(names)), degrees_(std::move(degrees)) {
    if (names_.size() != degrees_.size())
        throw Error(ErrorCode::DimensionMismatch, "one degree per basis element");
    std::set<std::string> seen;
    for (const auto& n : names_)
        if (!seen.insert(n).second) throw Error(ErrorCode::InvalidArgument, "duplicate basis name '" + n + "'");
}

GradedSpace GradedSpace::shifted() const {
    std::vector<std::string> names;
    for (const auto& n : names_) names.push_back("s" + n);
    return GradedSpace(names, shift_degrees(degrees_, -1));
}

// ---------------------------------------------------------------- TaylorMap

TaylorMap::TaylorMap(Field f, GradedSpace bar, std::optional<GradedSpace> module, GradedSpace target, int degree,
                     int max_arity, int degree_slope)
    : f_(f),
      bar_(std::make_shared<const GradedSpace>(std::move(bar))),
      target_(std::make_shared<const GradedSpace>(std::move(target))),
      degree_(degree),
      slope_(degree_slope),
      max_arity_(max_arity) {
    if (module) module_ = std::make_shared<const GradedSpace>(std::move(*module));
    if (max_arity < 1) throw Error(ErrorCode::InvalidArgument, "max arity must be positive");
}

const GradedSpace& TaylorMap::module() const {
    if (!module_) throw Error(ErrorCode::InvalidArgument, "algebra-shaped map has no module slot");
    return *module_;
}

size_t TaylorMap::source_size(int n) const {
    Radix r{bar_->dim(), module_ ? std::optional<size_t>(module_->dim()) : std::nullopt};
    return r.size(n);
}

size_t TaylorMap::factor_dim(int n, int position) const {
    return (module_ && position == n - 1) ? module_->dim() : bar_->dim();
}

int TaylorMap::factor_degree(int n, int position, size_t index) const {
    return (module_ && position == n - 1) ? module_->degree(index) : bar_->degree(index);
}

std::vector<size_t> TaylorMap::decode(int n, size_t col) const {
    std::vector<size_t> d(static_cast<size_t>(n));
    for (int k = n - 1; k >= 0; --k) {
        size_t r = factor_dim(n, k);
        d[size_t(k)] = col % r;
        col /= r;
    }
    return d;
}

size_t TaylorMap::encode(const std::vector<size_t>& digits) const {
    int n = int(digits.size());
    size_t col = 0;
    for (int k = 0; k < n; ++k) col = col * factor_dim(n, k) + digits[size_t(k)];
    return col;
}

int TaylorMap::source_degree(int n, size_t col) const {
    int deg = 0;
    for (int k = n - 1; k >= 0; --k) {
        size_t r = factor_dim(n, k);
        deg += factor_degree(n, k, col % r);
        col /= r;
    }
    return deg;
}

void TaylorMap::set(int n, SparseMatrix m) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "arity must be positive");
    if (n > max_arity_)
        throw Error(ErrorCode::ArityBudgetExceeded,
                    "component " + std::to_string(n) + " beyond max arity " + std::to_string(max_arity_));
    if (m.rows() != target_->dim() || m.cols() != source_size(n))
        throw Error(ErrorCode::ShapeMismatch, "component " + std::to_string(n) + " has the wrong shape");
    int deg = degree(n);
    for (size_t j = 0; j < m.cols(); ++j) {
        if (m.column(j).empty()) continue;
        int sd = source_degree(n, j);
        for (const auto& [i, v] : m.column(j))
            if (target_->degree(i) != sd + deg)
                throw Error(ErrorCode::DegreeMismatch, "component " + std::to_string(n) + " is not homogeneous of degree " +
                                                           std::to_string(deg));
    }
    if (m.is_zero())
        comps_.erase(n);
    else
        comps_[n] = std::move(m);
}

const SparseMatrix* TaylorMap::find(int n) const {
    if (n > max_arity_)
        throw Error(ErrorCode::ArityBudgetExceeded,
                    "component " + std::to_string(n) + " is beyond the verified arity " + std::to_string(max_arity_));
    auto it = comps_.find(n);
    return it == comps_.end() ? nullptr : &it->second;
}

SparseMatrix TaylorMap::component(int n) const {
    const SparseMatrix* p = find(n);
    return p ? *p : SparseMatrix(f_, target_->dim(), source_size(n));
}

std::vector<int> TaylorMap::arities() const {
    std::vector<int> a;
    for (const auto& [n, m] : comps_) a.push_back(n);
    return a;
}

TaylorMap TaylorMap::empty_like(int degree, int degree_slope) const {
    TaylorMap t = *this;
    t.comps_.clear();
    t.degree_ = degree;
    t.slope_ = degree_slope;
    return t;
}

TaylorMap TaylorMap::truncated(int n) const {
    TaylorMap t = *this;
    for (auto it = t.comps_.begin(); it != t.comps_.end();) it = it->first > n ? t.comps_.erase(it) : std::next(it);
    return t;
}

TaylorMap TaylorMap::plus(const TaylorMap& o, const FieldElement& c) const {
    TaylorMap t = *this;
    for (const auto& [n, m] : o.comps_) {
        SparseMatrix acc = t.component(n);
        add_into(acc, m, c);
        t.set(n, std::move(acc));
    }
    return t;
}

bool TaylorMap::is_zero_up_to(int n) const {
    for (const auto& [k, m] : comps_)
        if (k <= n && !m.is_zero()) return false;
    return true;
}

// ---------------------------------------------------------------- shifts

namespace {

// b_n = -s m_n (s^{-1})^n: on (sa_1 .. sa_n) the sign is -(-1)^{sum_i (n-i)(|a_i|-1)}
FieldElement bar_sign(const TaylorMap& unshifted_shape, int n, size_t col) {
    auto digits = unshifted_shape.decode(n, col);
    long e = 1;
    if (faults().suspension_sign) return sign(unshifted_shape.field(), e);
    for (int i = 0; i < n; ++i) e += long(n - 1 - i) * (unshifted_shape.bar().degree(digits[size_t(i)]) - 1);
    return sign(unshifted_shape.field(), e);
}

TaylorMap resign(const TaylorMap& from, const TaylorMap& unshifted_shape, TaylorMap to) {
    for (int n : from.arities()) {
        SparseMatrix m = *from.find(n);
        for (size_t j = 0; j < m.cols(); ++j) {
            if (m.column(j).empty()) continue;
            FieldElement s = bar_sign(unshifted_shape, n, j);
            for (auto& e : m.column(j)) e.second *= s;
        }
        to.set(n, std::move(m));
    }
    return to;
}

}  // namespace

TaylorMap shift_signs(const TaylorMap& m) {
    if (m.is_module_shape()) throw Error(ErrorCode::InvalidArgument, "shift_signs takes algebra operations");
    if (m.base_degree() != 2 || m.degree_slope() != -1)
        throw Error(ErrorCode::DegreeMismatch, "m_n must have degree 2 - n");
    if (!(m.bar() == m.target())) throw Error(ErrorCode::InvalidArgument, "operations must act on one space");
    TaylorMap b(m.field(), m.bar().shifted(), std::nullopt, m.target().shifted(), 1, m.max_arity());
    return resign(m, m, b);
}

TaylorMap unshift(const TaylorMap& b) {
    if (b.is_module_shape()) throw Error(ErrorCode::InvalidArgument, "unshift takes algebra components");
    if (b.base_degree() != 1 || b.degree_slope() != 0)
        throw Error(ErrorCode::DegreeMismatch, "b_n must have degree 1");
    GradedSpace a = desuspended(b.bar());
    TaylorMap m(b.field(), a, std::nullopt, desuspended(b.target()), 2, b.max_arity(), -1);
    return resign(b, m, m);
}

// ---------------------------------------------------------------- algebras and modules

AInftyAlgebra::AInftyAlgebra(Field f, GradedSpace space, TaylorMap b, std::optional<size_t> unit)
    : f_(f), space_(std::move(space)), b_(std::move(b)), unit_(unit) {
    if (b_.is_module_shape()) throw Error(ErrorCode::InvalidArgument, "algebra structure must be algebra-shaped");
    GradedSpace s = space_.shifted();
    if (!same_degrees(b_.bar(), s) || !same_degrees(b_.target(), s))
        throw Error(ErrorCode::DegreeMismatch, "structure maps must act on the shifted space");
    if (b_.base_degree() != 1 || b_.degree_slope() != 0)
        throw Error(ErrorCode::DegreeMismatch, "b_n must have degree 1");
    if (unit_ && *unit_ >= space_.dim()) throw Error(ErrorCode::InvalidArgument, "unit index out of range");
    if (unit_ && space_.degree(*unit_) != 0) throw Error(ErrorCode::MissingUnit, "unit must have degree 0");
}

AInftyAlgebra AInftyAlgebra::from_operations(Field f, GradedSpace space, const TaylorMap& m,
                                             std::optional<size_t> unit) {
    return AInftyAlgebra(f, std::move(space), shift_signs(m), unit);
}

AInftyAlgebra AInftyAlgebra::from_dg(const GradedAlgebra& a, int max_arity) {
    Field f = a.field();
    size_t n = a.dim();
    GradedSpace space(a.names(), a.degrees());
    TaylorMap m(f, space, std::nullopt, space, 2, std::max(max_arity, 2), -1);
    if (a.differential()) m.set_dense(1, *a.differential());
    SparseMatrix m2(f, n, n * n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) m2.column(i * n + j) = to_sparse(a.product(i, j));
    m.set(2, std::move(m2));
    std::optional<size_t> unit;
    const Vector& u = a.unit();
    size_t nz = 0, where = 0;
    for (size_t i = 0; i < n; ++i)
        if (!u[i].is_zero()) ++nz, where = i;
    if (nz == 1 && u[where].is_one()) unit = where;
    auto out = from_operations(f, space, m, unit);
    if (max_arity < 2) throw Error(ErrorCode::ArityBudgetExceeded, "a DG algebra needs arity 2");
    return out;
}

bool AInftyAlgebra::strict_unit_holds() const {
    if (!unit_) return false;
    size_t u = *unit_, n = dim();
    for (int k : b_.arities()) {
        const SparseMatrix& m = *b_.find(k);
        for (size_t j = 0; j < m.cols(); ++j) {
            auto digits = b_.decode(k, j);
            bool has_unit = std::find(digits.begin(), digits.end(), u) != digits.end();
            if (!has_unit) continue;
            if (k != 2 && !m.column(j).empty()) return false;
        }
    }
    const SparseMatrix* b2 = b_.find(2);
    if (!b2) return false;
    for (size_t x = 0; x < n; ++x) {
        SparseVec left{{x, f_.one()}}, right{{x, sign(f_, space_.degree(x))}};
        if (x == u) {
            // b_2(s1, s1) = s1
            if (b2->column(u * n + u) != left) return false;
            continue;
        }
        if (b2->column(u * n + x) != left || b2->column(x * n + u) != right) return false;
    }
    return true;
}

AInftyModule::AInftyModule(AInftyAlgebra algebra, GradedSpace space, TaylorMap b)
    : algebra_(std::move(algebra)), space_(std::move(space)), b_(std::move(b)) {
    if (!b_.is_module_shape()) throw Error(ErrorCode::InvalidArgument, "module structure must be module-shaped");
    if (!same_degrees(b_.bar(), algebra_.b().bar()))
        throw Error(ErrorCode::DegreeMismatch, "module over another algebra");
    if (!same_degrees(b_.module(), space_) || !same_degrees(b_.target(), space_))
        throw Error(ErrorCode::DegreeMismatch, "module structure must act on the module");
    if (b_.base_degree() != 1 || b_.degree_slope() != 0)
        throw Error(ErrorCode::DegreeMismatch, "b_{M,n} must have degree 1");
}

AInftyModule AInftyModule::from_dg(const AInftyAlgebra& algebra, GradedSpace space, const Matrix& d,
                                   const std::vector<Matrix>& action) {
    Field f = algebra.field();
    size_t dm = space.dim(), db = algebra.dim();
    if (action.size() != db) throw Error(ErrorCode::DimensionMismatch, "one action matrix per algebra basis element");
    if (d.rows() != dm || d.cols() != dm) throw Error(ErrorCode::DimensionMismatch, "differential has the wrong size");
    TaylorMap b(f, algebra.b().bar(), space, space, 1, algebra.max_arity());
    b.set_dense(1, d);
    SparseMatrix b2(f, dm, db * dm);
    for (size_t i = 0; i < db; ++i) {
        if (action[i].rows() != dm || action[i].cols() != dm)
            throw Error(ErrorCode::DimensionMismatch, "action matrix has the wrong size");
        for (size_t c = 0; c < dm; ++c) b2.column(i * dm + c) = to_sparse(action[i].column(c));
    }
    b.set(2, std::move(b2));
    return AInftyModule(algebra, std::move(space), std::move(b));
}

// ---------------------------------------------------------------- composition

SparseMatrix compose_insert(const TaylorMap& outer, const TaylorMap& inner, int n, std::optional<int> only_q) {
    Field f = outer.field();
    bool inner_module = inner.is_module_shape();
    if (inner_module && !outer.is_module_shape())
        throw Error(ErrorCode::ShapeMismatch, "a module-shaped map cannot feed an algebra-shaped one");
    // outer arguments other than the inner output share the inner's bar space
    bool single_outer = only_q && *only_q == n && !outer.is_module_shape();
    if (!single_outer && !(inner.bar() == outer.bar())) throw Error(ErrorCode::ShapeMismatch, "bar spaces differ");
    if (inner_module ? inner.target().dim() != outer.module().dim() : inner.target().dim() != outer.bar().dim())
        throw Error(ErrorCode::ShapeMismatch, "inner target does not match the outer slot");

    Radix result{inner.bar().dim(), std::nullopt};
    if (outer.is_module_shape()) result.last = inner_module ? inner.module().dim() : outer.module().dim();
    Builder out(f, outer.target().dim(), result.size(n));

    int qlo = only_q ? *only_q : 1, qhi = only_q ? *only_q : n;
    for (int q = qlo; q <= qhi; ++q) {
        int o = n - q + 1;
        if (o < 1 || q < 1) continue;
        const SparseMatrix* ic = inner.find(q);
        if (!ic) continue;
        const SparseMatrix* oc = outer.find(o);
        if (!oc) continue;
        size_t inner_size = inner.source_size(q);
        // rows of the inner component: which inner columns produce target t
        std::vector<std::vector<std::pair<size_t, FieldElement>>> by_row(inner.target().dim());
        for (size_t c = 0; c < ic->cols(); ++c)
            for (const auto& [t, v] : ic->column(c)) by_row[t].emplace_back(c, v);
        bool odd_inner = inner.degree(q) % 2 != 0;
        int nbar = outer.is_module_shape() ? o - 1 : o;
        for (size_t ocol = 0; ocol < oc->cols(); ++ocol) {
            const SparseVec& ovec = oc->column(ocol);
            if (ovec.empty()) continue;
            auto digits = outer.decode(o, ocol);
            int plo = inner_module ? o - 1 : 0, phi = inner_module ? o - 1 : nbar - 1;
            size_t prefix = 0;
            int prefix_deg = 0;
            for (int p = 0; p < plo; ++p) {
                prefix = prefix * outer.bar().dim() + digits[size_t(p)];
                prefix_deg += outer.bar().degree(digits[size_t(p)]);
            }
            for (int p = plo; p <= phi; ++p) {
                size_t t = digits[size_t(p)];
                if (!by_row[t].empty()) {
                    size_t suffix = 0, suffix_size = 1;
                    for (int k = p + 1; k < o; ++k) {
                        size_t r = outer.factor_dim(o, k);
                        suffix = suffix * r + digits[size_t(k)];
                        suffix_size *= r;
                    }
                    FieldElement s = (odd_inner && prefix_deg % 2 != 0) ? -f.one() : f.one();
                    for (const auto& [c, v] : by_row[t]) {
                        size_t col = (prefix * inner_size + c) * suffix_size + suffix;
                        FieldElement sv = s * v;
                        for (const auto& [row, w] : ovec) out.add(col, row, sv * w);
                    }
                }
                if (p == phi) break;
                prefix = prefix * outer.bar().dim() + digits[size_t(p)];
                prefix_deg += outer.bar().degree(digits[size_t(p)]);
            }
        }
    }
    return out.build();
}

namespace {

struct Block {
    const SparseMatrix* m;
    size_t source_size;
};

void tensor_accumulate(const SparseMatrix& outer, size_t radix, const std::vector<Block>& blocks, Builder& out) {
    // depth-first over one nonzero column of each block
    struct Frame {
        size_t src, tuple;
        FieldElement coeff;
    };
    std::vector<Frame> stack{{0, 0, outer.field().one()}};
    for (const auto& b : blocks) {
        std::vector<Frame> next;
        for (const auto& fr : stack)
            for (size_t c = 0; c < b.m->cols(); ++c)
                for (const auto& [t, v] : b.m->column(c))
                    next.push_back({fr.src * b.source_size + c, fr.tuple * radix + t, fr.coeff * v});
        stack = std::move(next);
        if (stack.empty()) return;
    }
    for (const auto& fr : stack)
        for (const auto& [row, w] : outer.column(fr.tuple)) out.add(fr.src, row, fr.coeff * w);
}

void check_morphism_factor(const TaylorMap& outer, const TaylorMap& f, int arity) {
    if (f.is_module_shape() || outer.is_module_shape())
        throw Error(ErrorCode::ShapeMismatch, "tensor composition takes algebra-shaped maps");
    if (f.degree(arity) != 0) throw Error(ErrorCode::DegreeMismatch, "tensor factors must have degree 0");
    if (f.target().dim() != outer.bar().dim()) throw Error(ErrorCode::ShapeMismatch, "factor target mismatch");
}

}  // namespace

SparseMatrix compose_tensor(const TaylorMap& outer, const std::vector<std::pair<const TaylorMap*, int>>& factors) {
    if (factors.empty()) throw Error(ErrorCode::InvalidArgument, "no factors");
    int n = 0;
    std::vector<Block> blocks;
    const TaylorMap* first = factors.front().first;
    for (const auto& [f, k] : factors) {
        check_morphism_factor(outer, *f, k);
        if (f->bar().dim() != first->bar().dim()) throw Error(ErrorCode::ShapeMismatch, "factor sources differ");
        n += k;
        const SparseMatrix* m = f->find(k);
        blocks.push_back({m, f->source_size(k)});
    }
    Radix src{first->bar().dim(), std::nullopt};
    Builder out(outer.field(), outer.target().dim(), src.size(n));
    const SparseMatrix* oc = outer.find(int(factors.size()));
    bool any_zero = std::any_of(blocks.begin(), blocks.end(), [](const Block& b) { return b.m == nullptr; });
    if (oc && !any_zero) tensor_accumulate(*oc, outer.bar().dim(), blocks, out);
    return out.build();
}

SparseMatrix compose_morphism(const TaylorMap& outer, const TaylorMap& psi, int n) {
    check_morphism_factor(outer, psi, 1);
    Radix src{psi.bar().dim(), std::nullopt};
    Builder out(outer.field(), outer.target().dim(), src.size(n));
    // compositions of n, enumerated as cut sets of the n - 1 gaps
    std::vector<int> parts;
    std::function<void(int)> rec = [&](int left) {
        if (left == 0) {
            const SparseMatrix* oc = outer.find(int(parts.size()));
            if (!oc) return;
            std::vector<Block> blocks;
            for (int k : parts) {
                const SparseMatrix* m = psi.find(k);
                if (!m) return;
                blocks.push_back({m, psi.source_size(k)});
            }
            tensor_accumulate(*oc, outer.bar().dim(), blocks, out);
            return;
        }
        for (int k = 1; k <= left; ++k) {
            parts.push_back(k);
            rec(left - k);
            parts.pop_back();
        }
    };
    rec(n);
    return out.build();
}

SparseMatrix algebra_bracket(const AInftyAlgebra& a, const AInftyAlgebra& c, const TaylorMap& x, int n) {
    SparseMatrix r = compose_insert(c.b(), x, n, n);
    SparseMatrix right = compose_insert(x, a.b(), n, 1);
    add_into(r, right, -sign(x.field(), x.degree(n)));
    return r;
}

SparseMatrix module_bracket(const AInftyModule& m, const AInftyModule& nm, const TaylorMap& x, int n) {
    SparseMatrix r = compose_insert(nm.b(), x, n);
    FieldElement s = -sign(x.field(), x.base_degree());
    add_into(r, compose_insert(x, m.algebra().b(), n), s);
    add_into(r, compose_insert(x, m.b(), n), s);
    return r;
}

SparseMatrix module_b1_bracket(const AInftyModule& m, const AInftyModule& nm, const TaylorMap& x, int n) {
    SparseMatrix r = compose_insert(nm.b(), x, n, n);
    FieldElement s = -sign(x.field(), x.base_degree());
    add_into(r, compose_insert(x, m.algebra().b(), n, 1), s);
    add_into(r, compose_insert(x, m.b(), n, 1), s);
    return r;
}

// ---------------------------------------------------------------- cochain spaces

CochainSpace::CochainSpace(const TaylorMap& shape, int arity, int degree)
    : n_(arity), degree_(degree), rows_(shape.target().dim()), cols_(shape.source_size(arity)), f_(shape.field()) {
    row_degree_ = shape.target().degrees();
    pos_.resize(rows_);
    for (size_t t = 0; t < rows_; ++t) {
        auto& slot = by_degree_[row_degree_[t]];
        pos_[t] = slot.size();
        slot.push_back(t);
    }
    col_degree_.resize(cols_);
    offset_.assign(cols_ + 1, 0);
    for (size_t c = 0; c < cols_; ++c) {
        col_degree_[c] = shape.source_degree(arity, c);
        auto it = by_degree_.find(col_degree_[c] + degree);
        offset_[c + 1] = offset_[c] + (it == by_degree_.end() ? 0 : it->second.size());
    }
}

std::pair<size_t, size_t> CochainSpace::entry(size_t k) const {
    if (k >= dim()) throw Error(ErrorCode::InvalidArgument, "cochain index out of range");
    size_t c = size_t(std::upper_bound(offset_.begin(), offset_.end(), k) - offset_.begin()) - 1;
    const auto& rows = by_degree_.at(col_degree_[c] + degree_);
    return {c, rows[k - offset_[c]]};
}

std::optional<size_t> CochainSpace::index(size_t col, size_t row) const {
    if (col >= cols_ || row >= rows_) return std::nullopt;
    if (row_degree_[row] != col_degree_[col] + degree_) return std::nullopt;
    return offset_[col] + pos_[row];
}

Vector CochainSpace::flatten(const SparseMatrix& m) const {
    Vector v = zero_vector(f_, dim());
    for (size_t c = 0; c < m.cols(); ++c)
        for (const auto& [r, x] : m.column(c)) {
            auto k = index(c, r);
            if (!k) throw Error(ErrorCode::Internal, "entry outside the homogeneous cochains");
            v[*k] = x;
        }
    return v;
}

SparseMatrix CochainSpace::unflatten(const Vector& v) const {
    if (v.size() != dim()) throw Error(ErrorCode::DimensionMismatch, "cochain vector has the wrong length");
    Builder b(f_, rows_, cols_);
    for (size_t k = 0; k < v.size(); ++k)
        if (!v[k].is_zero()) {
            auto [c, r] = entry(k);
            b.add(c, r, v[k]);
        }
    return b.build();
}

SparseMatrix operator_matrix(const TaylorMap& shape, const CochainSpace& from, const CochainSpace& to,
                             const std::function<SparseMatrix(const TaylorMap&)>& op) {
    SparseMatrix out(shape.field(), to.dim(), from.dim());
    TaylorMap x = shape.empty_like(from.degree());
    for (size_t k = 0; k < from.dim(); ++k) {
        auto [c, r] = from.entry(k);
        SparseMatrix e(shape.field(), shape.target().dim(), shape.source_size(from.arity()));
        e.column(c).emplace_back(r, shape.field().one());
        x.set(from.arity(), std::move(e));
        SparseMatrix y = op(x);
        SparseVec col;
        for (size_t j = 0; j < y.cols(); ++j)
            for (const auto& [i, v] : y.column(j)) {
                auto idx = to.index(j, i);
                if (!idx) throw Error(ErrorCode::Internal, "operator leaves the homogeneous cochains");
                col.emplace_back(*idx, v);
            }
        std::sort(col.begin(), col.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        out.column(k) = std::move(col);
    }
    return out;
}

// ---------------------------------------------------------------- checks

std::vector<Violation> coderivation_square(const AInftyAlgebra& a, int n) {
    if (n > a.max_arity())
        throw Error(ErrorCode::ArityBudgetExceeded, "arity " + std::to_string(n) + " exceeds the known components (" +
                                                        std::to_string(a.max_arity()) + ")");
    std::vector<Violation> out;
    for (int k = 1; k <= n; ++k) {
        SparseMatrix r = compose_insert(a.b(), a.b(), k);
        if (!r.is_zero()) out.push_back({k, r, r.nonzeros()});
    }
    return out;
}

std::vector<Violation> module_square(const AInftyModule& m, int n) {
    if (n > m.max_arity() || n > m.algebra().max_arity())
        throw Error(ErrorCode::ArityBudgetExceeded, "arity " + std::to_string(n) + " exceeds the known components");
    std::vector<Violation> out;
    for (int k = 1; k <= n; ++k) {
        SparseMatrix r = compose_insert(m.b(), m.algebra().b(), k);
        add_into(r, compose_insert(m.b(), m.b(), k), m.algebra().field().one());
        if (!r.is_zero()) out.push_back({k, r, r.nonzeros()});
    }
    return out;
}

TaylorMap morphism_residual(const AInftyAlgebra& a, const AInftyAlgebra& c, const TaylorMap& psi, int n) {
    TaylorMap d(a.field(), a.b().bar(), std::nullopt, c.b().bar(), 1, std::max(n, 1));
    for (int k = 1; k <= n; ++k) {
        SparseMatrix r = compose_morphism(c.b(), psi, k);
        add_into(r, compose_insert(psi, a.b(), k), -a.field().one());
        d.set(k, std::move(r));
    }
    return d;
}

TaylorMap module_morphism_residual(const AInftyModule& m, const AInftyModule& nm, const TaylorMap& f, int n) {
    TaylorMap d = f.empty_like(1);
    d.set_max_arity(std::max(n, 1));
    for (int k = 1; k <= n; ++k) d.set(k, module_bracket(m, nm, f, k));
    return d;
}

Defect morphism_defect(const AInftyAlgebra& a, const AInftyAlgebra& c, const TaylorMap& psi, int n) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "arity must be positive");
    for (int k = 1; k <= n; ++k)
        if (k > psi.max_arity()) throw Error(ErrorCode::ArityBudgetExceeded, "psi is not known up to arity " + std::to_string(n));
    TaylorMap trunc = psi.truncated(n);
    trunc.set_max_arity(std::max(psi.max_arity(), n + 1));
    Defect out{morphism_residual(a, c, trunc, n + 1), n + 1, true};
    for (int k = 1; k <= n; ++k)
        if (!out.d.is_zero_up_to(k))
            throw Error(ErrorCode::DefectAtLowerArity, "D_" + std::to_string(k) + " is nonzero");
    TaylorMap top = out.d.empty_like(1);
    top.set_max_arity(n + 1);
    if (const SparseMatrix* t = out.d.find(n + 1)) top.set(n + 1, *t);
    out.top_closed = algebra_bracket(a, c, top, n + 1).is_zero();
    return out;
}

// ---------------------------------------------------------------- cohomology

namespace {

ComplexCohomology complex_cohomology(Field f, const GradedSpace& space, const SparseMatrix& d) {
    ComplexCohomology h;
    h.field = f;
    h.ambient = space.dim();
    h.echelon = std::make_shared<SparseEchelon>(f, true);
    for (size_t j = 0; j < d.cols(); ++j) h.echelon->insert(d.column(j));
    h.boundary_count = d.cols();
    auto z = kernel_basis(d);
    std::vector<std::string> names;
    std::vector<int> degrees;
    std::set<std::string> used;
    for (const auto& v : z.vectors()) {
        size_t slot = h.echelon->inserted();
        if (!h.echelon->insert(to_sparse(v))) continue;
        std::optional<int> deg;
        size_t lead = 0;
        for (size_t i = v.size(); i-- > 0;)
            if (!v[i].is_zero()) {
                if (deg && *deg != space.degree(i)) throw Error(ErrorCode::Internal, "inhomogeneous cocycle");
                deg = space.degree(i);
                lead = i;
            }
        std::string name = "[" + space.names()[lead] + "]";
        while (!used.insert(name).second) name += "'";
        names.push_back(name);
        degrees.push_back(*deg);
        h.representatives.push_back(v);
        h.rep_slot.push_back(slot);
    }
    h.space = GradedSpace(names, degrees);
    return h;
}

SparseMatrix component_or_zero(const TaylorMap& t, int n) { return t.component(n); }

}  // namespace

SparseVec ComplexCohomology::project(const SparseVec& cocycle) const {
    auto combo = echelon->express(cocycle);
    if (!combo) throw Error(ErrorCode::InvalidArgument, "vector is not a cocycle");
    SparseVec out;
    for (size_t k = 0; k < rep_slot.size(); ++k)
        for (const auto& [i, v] : *combo)
            if (i == rep_slot[k]) out.emplace_back(k, v);
    return out;
}

Vector ComplexCohomology::project(const Vector& cocycle) const {
    return to_dense(project(to_sparse(cocycle)), field, representatives.size());
}

ComplexCohomology algebra_cohomology(const AInftyAlgebra& a) {
    return complex_cohomology(a.field(), a.space(), component_or_zero(a.b(), 1));
}

ComplexCohomology module_cohomology(const AInftyModule& m) {
    return complex_cohomology(m.algebra().field(), m.space(), component_or_zero(m.b(), 1));
}

namespace {

// m_2(x, y) for homogeneous x from b_2 = (-1)^{|x|} s m_2
SparseVec m2_apply(const AInftyAlgebra& a, const SparseVec& x, int deg_x, const SparseVec& y) {
    SparseVec out;
    const SparseMatrix* b2 = a.b().find(2);
    if (!b2) return out;
    size_t n = a.dim();
    for (const auto& [i, u] : x)
        for (const auto& [j, v] : y) axpy(out, u * v, b2->column(i * n + j));
    if (deg_x % 2 != 0)
        for (auto& e : out) e.second = -e.second;
    return out;
}

// b_{M,2}(sa, m) = a.m
SparseVec action_apply(const AInftyModule& m, const SparseVec& a, const SparseVec& x) {
    SparseVec out;
    const SparseMatrix* b2 = m.b().find(2);
    if (!b2) return out;
    size_t dm = m.dim();
    for (const auto& [i, u] : a)
        for (const auto& [j, v] : x) axpy(out, u * v, b2->column(i * dm + j));
    return out;
}

Matrix action_matrix(const AInftyModule& m, const ComplexCohomology& hb, size_t i, const ComplexCohomology& hm) {
    size_t k = hm.representatives.size();
    Matrix out(m.algebra().field(), k, k);
    SparseVec a = to_sparse(hb.representatives[i]);
    for (size_t c = 0; c < k; ++c) {
        auto img = hm.project(action_apply(m, a, to_sparse(hm.representatives[c])));
        for (const auto& [r, v] : img) out(r, c) = v;
    }
    return out;
}

}  // namespace

GradedAlgebra cohomology_algebra(const AInftyAlgebra& a, const ComplexCohomology& h) {
    Field f = a.field();
    size_t k = h.representatives.size();
    if (k == 0) throw Error(ErrorCode::MissingUnit, "cohomology is zero");
    std::vector<std::vector<Vector>> products(k, std::vector<Vector>(k));
    for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < k; ++j) {
            auto p = m2_apply(a, to_sparse(h.representatives[i]), h.space.degree(i), to_sparse(h.representatives[j]));
            products[i][j] = to_dense(h.project(p), f, k);
        }
    // the unit: e with e x_j = x_j = x_j e for all j, supported in degree 0
    std::vector<size_t> zero_deg;
    for (size_t i = 0; i < k; ++i)
        if (h.space.degree(i) == 0) zero_deg.push_back(i);
    Matrix sys(f, 2 * k * k, zero_deg.size());
    Vector rhs = zero_vector(f, 2 * k * k);
    for (size_t c = 0; c < zero_deg.size(); ++c)
        for (size_t j = 0; j < k; ++j)
            for (size_t r = 0; r < k; ++r) {
                sys(j * k + r, c) = products[zero_deg[c]][j][r];
                sys(k * k + j * k + r, c) = products[j][zero_deg[c]][r];
            }
    for (size_t j = 0; j < k; ++j) {
        rhs[j * k + j] = f.one();
        rhs[k * k + j * k + j] = f.one();
    }
    auto sol = solve(sys, rhs);
    if (!sol) throw Error(ErrorCode::MissingUnit, "cohomology has no unit");
    Vector unit = zero_vector(f, k);
    for (size_t c = 0; c < zero_deg.size(); ++c) unit[zero_deg[c]] = (*sol)[c];
    return GradedAlgebra(f, h.space.names(), h.space.degrees(), unit, products);
}

GradedBimodule cohomology_bimodule(const AInftyAlgebra& a, const AInftyAlgebra& c, const Matrix& phi) {
    auto ha = algebra_cohomology(a), hc = algebra_cohomology(c);
    GradedAlgebra HA = cohomology_algebra(a, ha);
    Field f = a.field();
    size_t ka = ha.representatives.size(), kc = hc.representatives.size();
    std::vector<Matrix> left, right;
    for (size_t i = 0; i < ka; ++i) {
        SparseVec img = to_sparse(phi.apply(ha.representatives[i]));
        Matrix l(f, kc, kc), r(f, kc, kc);
        for (size_t j = 0; j < kc; ++j) {
            SparseVec y = to_sparse(hc.representatives[j]);
            for (const auto& [row, v] : hc.project(m2_apply(c, img, ha.space.degree(i), y))) l(row, j) = v;
            for (const auto& [row, v] : hc.project(m2_apply(c, y, hc.space.degree(j), img))) r(row, j) = v;
        }
        left.push_back(l);
        right.push_back(r);
    }
    return GradedBimodule(HA, hc.space.names(), hc.space.degrees(), left, right);
}

GradedBimodule cohomology_hom_bimodule(const AInftyModule& m, const AInftyModule& nm) {
    const AInftyAlgebra& b = m.algebra();
    auto hb = algebra_cohomology(b);
    GradedAlgebra HB = cohomology_algebra(b, hb);
    auto hm = module_cohomology(m), hn = module_cohomology(nm);
    Field f = b.field();
    size_t km = hm.representatives.size(), kn = hn.representatives.size(), dim = km * kn;
    std::vector<std::string> names;
    std::vector<int> degrees;
    for (size_t r = 0; r < kn; ++r)
        for (size_t c = 0; c < km; ++c) {
            names.push_back("Hom(" + hm.space.names()[c] + "," + hn.space.names()[r] + ")");
            degrees.push_back(hn.space.degree(r) - hm.space.degree(c));
        }
    std::vector<Matrix> left, right;
    for (size_t i = 0; i < hb.representatives.size(); ++i) {
        Matrix an = action_matrix(nm, hb, i, hn), am = action_matrix(m, hb, i, hm);
        Matrix l(f, dim, dim), r(f, dim, dim);
        for (size_t row = 0; row < kn; ++row)
            for (size_t c = 0; c < km; ++c) {
                // phi = E_{row,c}: a.phi = sum_r' an(r', row) E_{r',c}; phi.a = sum_c' am(c, c') E_{row,c'}
                for (size_t r2 = 0; r2 < kn; ++r2) l(r2 * km + c, row * km + c) = an(r2, row);
                for (size_t c2 = 0; c2 < km; ++c2) r(row * km + c2, row * km + c) = am(c, c2);
            }
        left.push_back(l);
        right.push_back(r);
    }
    return GradedBimodule(HB, names, degrees, left, right);
}

}  // namespace xl
