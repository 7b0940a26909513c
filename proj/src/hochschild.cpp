#include "exactlift/hochschild.hpp"

#include <algorithm>
#include <map>

#include "exactlift/error.hpp"

namespace xl {

namespace {

void check_vector(Field f, const Vector& v, size_t n, const char* what) {
    if (v.size() != n) throw Error(ErrorCode::DimensionMismatch, std::string(what) + " has wrong length");
    for (const auto& x : v)
        if (x.field() != f) throw Error(ErrorCode::DescriptorMismatch, std::string(what) + " over another field");
}

void check_square(Field f, const Matrix& m, size_t n, const char* what) {
    if (m.rows() != n || m.cols() != n) throw Error(ErrorCode::DimensionMismatch, std::string(what) + " has wrong shape");
    if (m.field() != f) throw Error(ErrorCode::DescriptorMismatch, std::string(what) + " over another field");
}

// sum over k of c_k a_k for a list of matrices
Matrix combine(Field f, const Vector& c, const std::vector<Matrix>& a, size_t n) {
    Matrix out(f, n, n);
    for (size_t k = 0; k < c.size(); ++k)
        if (!c[k].is_zero()) out = out + c[k] * a[k];
    return out;
}

size_t ipow(size_t r, int n) {
    size_t p = 1;
    for (int i = 0; i < n; ++i) {
        if (r != 0 && p > (size_t(1) << 40) / r) throw Error(ErrorCode::BudgetExceeded, "too many cochain arguments");
        p *= r;
    }
    return p;
}

FieldElement signed_value(const FieldElement& v, bool negative) { return negative ? -v : v; }

struct Accumulator {
    std::map<size_t, FieldElement> acc;
    void add(size_t row, const FieldElement& v) {
        auto [it, fresh] = acc.emplace(row, v);
        if (!fresh) it->second += v;
    }
    SparseVec take() {
        SparseVec out;
        for (auto& [i, v] : acc)
            if (!v.is_zero()) out.push_back({i, std::move(v)});
        acc.clear();
        return out;
    }
};

// For each argument position a: the pairs (x, y) of argument positions with
// the coefficient of the argument a in the (reduced) product x y.
std::vector<std::vector<std::tuple<size_t, size_t, FieldElement>>> merge_table(const GradedAlgebra& b,
                                                                               const std::vector<size_t>& reps,
                                                                               bool normalized) {
    size_t r = reps.size();
    std::vector<std::vector<std::tuple<size_t, size_t, FieldElement>>> into(r);
    for (size_t x = 0; x < r; ++x)
        for (size_t y = 0; y < r; ++y) {
            Vector z = b.product(reps[x], reps[y]);
            if (normalized) z = b.reduce_mod_unit(z);
            for (size_t a = 0; a < r; ++a)
                if (!z[reps[a]].is_zero()) into[a].emplace_back(x, y, z[reps[a]]);
        }
    return into;
}

std::vector<size_t> argument_basis(const GradedAlgebra& b, bool normalized) {
    std::vector<size_t> reps;
    for (size_t i = 0; i < b.dim(); ++i)
        if (!normalized || i != b.unit_pivot()) reps.push_back(i);
    return reps;
}

CohomologyReport make_report(int n, std::optional<int> j, SparseMatrix d_in, SparseMatrix d_out, bool want_reps) {
    if (d_in.rows() != d_out.cols()) throw Error(ErrorCode::Internal, "differentials do not compose");
    CohomologyReport rep;
    rep.n = n;
    rep.j = j;
    rep.cochain_dim = d_out.cols();
    size_t rank_out = rank(d_out);
    rep.coboundary_dim = rank(d_in);
    rep.cocycle_dim = rep.cochain_dim - rank_out;
    rep.rank = rep.cocycle_dim - rep.coboundary_dim;
    rep.d_squared_zero = d_in.cols() == 0 || d_out.rows() == 0 || (d_out * d_in).is_zero();
    if (want_reps) {
        SubspaceBasis z = kernel_basis(d_out);
        SparseEchelon b(d_out.field());
        for (size_t c = 0; c < d_in.cols(); ++c) b.insert(d_in.column(c));
        for (const auto& v : z.vectors())
            if (b.insert(to_sparse(v))) rep.representatives.push_back(v);
        if (rep.representatives.size() != rep.rank) throw Error(ErrorCode::Internal, "cohomology count mismatch");
    }
    rep.d_in = std::move(d_in);
    rep.d_out = std::move(d_out);
    return rep;
}

void check_arity(int n, int max_arity) {
    if (n < 0) throw Error(ErrorCode::InvalidArgument, "negative cohomological degree");
    if (n > max_arity)
        throw Error(ErrorCode::ArityBudgetExceeded,
                    "degree " + std::to_string(n) + " exceeds arity budget " + std::to_string(max_arity));
}

}  // namespace

void require_characteristic(Field f, int max_arity) {
    unsigned long p = f.characteristic();
    if (p != 0 && p <= static_cast<unsigned long>(max_arity))
        throw Error(ErrorCode::CharacteristicTooSmall,
                    "characteristic " + std::to_string(p) + " must exceed the arity budget " + std::to_string(max_arity));
}

// ---------------------------------------------------------------- algebras

GradedAlgebra::GradedAlgebra(Field f, std::vector<std::string> names, std::vector<int> degrees, Vector unit,
                             std::vector<std::vector<Vector>> products, std::optional<Matrix> differential)
    : f_(f), names_(std::move(names)), degrees_(std::move(degrees)), unit_(std::move(unit)),
      products_(std::move(products)), differential_(std::move(differential)) {
    size_t n = names_.size();
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "algebra needs a basis");
    if (degrees_.size() != n) throw Error(ErrorCode::DimensionMismatch, "one degree per basis element");
    check_vector(f_, unit_, n, "unit");
    if (products_.size() != n) throw Error(ErrorCode::DimensionMismatch, "multiplication table has wrong size");
    for (size_t i = 0; i < n; ++i) {
        if (products_[i].size() != n) throw Error(ErrorCode::DimensionMismatch, "multiplication table has wrong size");
        for (size_t j = 0; j < n; ++j) {
            check_vector(f_, products_[i][j], n, "product");
            for (size_t k = 0; k < n; ++k)
                if (!products_[i][j][k].is_zero() && degrees_[k] != degrees_[i] + degrees_[j])
                    throw Error(ErrorCode::InvalidArgument,
                                "product " + names_[i] + "*" + names_[j] + " is not homogeneous");
        }
    }
    bool found = false;
    for (size_t k = 0; k < n; ++k) {
        if (unit_[k].is_zero()) continue;
        if (degrees_[k] != 0) throw Error(ErrorCode::MissingUnit, "unit must have degree 0");
        if (!found) unit_pivot_ = k, found = true;
    }
    if (!found) throw Error(ErrorCode::MissingUnit, "unit is zero");
    for (size_t i = 0; i < n; ++i) {
        Vector e = unit_vector(f_, n, i);
        if (multiply(unit_, e) != e || multiply(e, unit_) != e)
            throw Error(ErrorCode::MissingUnit, "unit law fails on " + names_[i]);
    }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            for (size_t k = 0; k < n; ++k) {
                Vector ek = unit_vector(f_, n, k), ei = unit_vector(f_, n, i);
                if (multiply(products_[i][j], ek) != multiply(ei, products_[j][k]))
                    throw Error(ErrorCode::NonAssociative,
                                "(" + names_[i] + names_[j] + ")" + names_[k] + " != " + names_[i] + "(" + names_[j] +
                                    names_[k] + ")");
            }
    if (differential_) {
        const Matrix& d = *differential_;
        check_square(f_, d, n, "differential");
        for (size_t r = 0; r < n; ++r)
            for (size_t c = 0; c < n; ++c)
                if (!d(r, c).is_zero() && degrees_[r] != degrees_[c] + 1)
                    throw Error(ErrorCode::InvalidArgument, "differential must have degree 1");
        if (!(d * d).is_zero()) throw Error(ErrorCode::InvalidArgument, "differential does not square to zero");
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                Vector ei = unit_vector(f_, n, i), ej = unit_vector(f_, n, j);
                Vector lhs = d.apply(products_[i][j]);
                Vector rhs = multiply(d.column(i), ej);
                Vector t = multiply(ei, d.column(j));
                rhs = (degrees_[i] % 2 != 0) ? rhs - t : rhs + t;
                if (lhs != rhs) throw Error(ErrorCode::InvalidArgument, "differential is not a derivation");
            }
    }
}

Vector GradedAlgebra::multiply(const Vector& a, const Vector& b) const {
    size_t n = dim();
    Vector out = zero_vector(f_, n);
    for (size_t i = 0; i < n; ++i) {
        if (a[i].is_zero()) continue;
        for (size_t j = 0; j < n; ++j) {
            if (b[j].is_zero()) continue;
            FieldElement c = a[i] * b[j];
            const Vector& p = products_[i][j];
            for (size_t k = 0; k < n; ++k)
                if (!p[k].is_zero()) out[k] += c * p[k];
        }
    }
    return out;
}

bool GradedAlgebra::concentrated_in_degree_zero() const {
    return std::all_of(degrees_.begin(), degrees_.end(), [](int d) { return d == 0; });
}

Vector GradedAlgebra::reduce_mod_unit(const Vector& x) const {
    size_t u = unit_pivot_;
    if (x[u].is_zero()) return x;
    FieldElement c = x[u] / unit_[u];
    Vector y = x - c * unit_;
    y[u] = f_.zero();
    return y;
}

namespace {

struct TableBuilder {
    Field k;
    size_t n;
    std::vector<std::vector<Vector>> t;
    TableBuilder(Field k, size_t n) : k(k), n(n), t(n, std::vector<Vector>(n, zero_vector(k, n))) {}
    void set(size_t i, size_t j, size_t target) { t[i][j][target] = k.one(); }
};

}  // namespace

GradedAlgebra ground_algebra(Field k) {
    TableBuilder tb(k, 1);
    tb.set(0, 0, 0);
    return GradedAlgebra(k, {"1"}, {0}, {k.one()}, tb.t);
}

GradedAlgebra dual_numbers(Field k, int t_degree) {
    TableBuilder tb(k, 2);
    tb.set(0, 0, 0);
    tb.set(0, 1, 1);
    tb.set(1, 0, 1);
    return GradedAlgebra(k, {"1", "t"}, {0, t_degree}, unit_vector(k, 2, 0), tb.t);
}

GradedAlgebra truncated_polynomial(Field k, int m) {
    if (m < 1) throw Error(ErrorCode::InvalidArgument, "truncation order must be positive");
    size_t n = size_t(m);
    TableBuilder tb(k, n);
    std::vector<std::string> names;
    std::vector<int> degrees(n, 0);
    for (size_t a = 0; a < n; ++a) {
        names.push_back(a == 0 ? "1" : a == 1 ? "t" : "t^" + std::to_string(a));
        for (size_t b = 0; a + b < n; ++b) tb.set(a, b, a + b);
    }
    return GradedAlgebra(k, names, degrees, unit_vector(k, n, 0), tb.t);
}

GradedAlgebra upper_triangular2(Field k) {
    // e11 = 0, e12 = 1, e22 = 2
    TableBuilder tb(k, 3);
    tb.set(0, 0, 0);
    tb.set(0, 1, 1);
    tb.set(1, 2, 1);
    tb.set(2, 2, 2);
    Vector unit = zero_vector(k, 3);
    unit[0] = unit[2] = k.one();
    return GradedAlgebra(k, {"e11", "e12", "e22"}, {0, 0, 0}, unit, tb.t);
}

GradedAlgebra matrix_algebra2(Field k) {
    TableBuilder tb(k, 4);
    auto idx = [](size_t a, size_t b) { return 2 * a + b; };
    for (size_t a = 0; a < 2; ++a)
        for (size_t b = 0; b < 2; ++b)
            for (size_t d = 0; d < 2; ++d) tb.set(idx(a, b), idx(b, d), idx(a, d));
    Vector unit = zero_vector(k, 4);
    unit[0] = unit[3] = k.one();
    return GradedAlgebra(k, {"e11", "e12", "e21", "e22"}, {0, 0, 0, 0}, unit, tb.t);
}

// ---------------------------------------------------------------- modules

GradedBimodule::GradedBimodule(const GradedAlgebra& b, std::vector<std::string> names, std::vector<int> degrees,
                               std::vector<Matrix> left, std::vector<Matrix> right)
    : f_(b.field()), names_(std::move(names)), degrees_(std::move(degrees)), left_(std::move(left)),
      right_(std::move(right)) {
    size_t n = names_.size(), nb = b.dim();
    if (degrees_.size() != n) throw Error(ErrorCode::DimensionMismatch, "one degree per bimodule basis element");
    if (left_.size() != nb || right_.size() != nb)
        throw Error(ErrorCode::DimensionMismatch, "one action matrix per algebra basis element");
    for (size_t i = 0; i < nb; ++i) {
        check_square(f_, left_[i], n, "left action");
        check_square(f_, right_[i], n, "right action");
        for (size_t r = 0; r < n; ++r)
            for (size_t c = 0; c < n; ++c) {
                if (!left_[i](r, c).is_zero() && degrees_[r] != b.degree(i) + degrees_[c])
                    throw Error(ErrorCode::NotABimodule, "left action of " + b.names()[i] + " breaks degrees");
                if (!right_[i](r, c).is_zero() && degrees_[r] != b.degree(i) + degrees_[c])
                    throw Error(ErrorCode::NotABimodule, "right action of " + b.names()[i] + " breaks degrees");
            }
    }
    Matrix id = Matrix::identity(f_, n);
    if (combine(f_, b.unit(), left_, n) != id || combine(f_, b.unit(), right_, n) != id)
        throw Error(ErrorCode::NotABimodule, "unit does not act as the identity");
    for (size_t i = 0; i < nb; ++i)
        for (size_t j = 0; j < nb; ++j) {
            const Vector& p = b.product(i, j);
            if (left_[i] * left_[j] != combine(f_, p, left_, n))
                throw Error(ErrorCode::NotABimodule, "left action is not associative");
            if (right_[j] * right_[i] != combine(f_, p, right_, n))
                throw Error(ErrorCode::NotABimodule, "right action is not associative");
            if (right_[j] * left_[i] != left_[i] * right_[j])
                throw Error(ErrorCode::NotABimodule, "left and right actions do not commute");
        }
}

GradedBimodule regular_bimodule(const GradedAlgebra& b) {
    size_t n = b.dim();
    std::vector<Matrix> left, right;
    for (size_t i = 0; i < n; ++i) {
        Matrix l(b.field(), n, n), r(b.field(), n, n);
        for (size_t j = 0; j < n; ++j)
            for (size_t k = 0; k < n; ++k) {
                l(k, j) = b.product(i, j)[k];
                r(k, j) = b.product(j, i)[k];
            }
        left.push_back(std::move(l));
        right.push_back(std::move(r));
    }
    return GradedBimodule(b, b.names(), b.degrees(), left, right);
}

GradedBimodule augmentation_bimodule(const GradedAlgebra& b, const Vector& eps, int degree) {
    check_vector(b.field(), eps, b.dim(), "augmentation");
    std::vector<Matrix> act;
    for (size_t i = 0; i < b.dim(); ++i) {
        Matrix m(b.field(), 1, 1);
        m(0, 0) = eps[i];
        act.push_back(m);
    }
    return GradedBimodule(b, {"k"}, {degree}, act, act);
}

LeftModule::LeftModule(const GradedAlgebra& b, std::vector<Matrix> action)
    : f_(b.field()), dim_(action.empty() ? 0 : action[0].rows()), action_(std::move(action)) {
    if (action_.size() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "one action matrix per algebra basis element");
    for (const auto& a : action_) check_square(f_, a, dim_, "module action");
    if (combine(f_, b.unit(), action_, dim_) != Matrix::identity(f_, dim_))
        throw Error(ErrorCode::InvalidArgument, "unit does not act as the identity");
    for (size_t i = 0; i < b.dim(); ++i)
        for (size_t j = 0; j < b.dim(); ++j)
            if (action_[i] * action_[j] != combine(f_, b.product(i, j), action_, dim_))
                throw Error(ErrorCode::InvalidArgument, "module action is not associative");
}

LeftModule augmentation_module(const GradedAlgebra& b, const Vector& eps) {
    check_vector(b.field(), eps, b.dim(), "augmentation");
    std::vector<Matrix> act;
    for (size_t i = 0; i < b.dim(); ++i) {
        Matrix m(b.field(), 1, 1);
        m(0, 0) = eps[i];
        act.push_back(m);
    }
    return LeftModule(b, act);
}

LeftModule regular_module(const GradedAlgebra& b) {
    size_t n = b.dim();
    std::vector<Matrix> act;
    for (size_t i = 0; i < n; ++i) {
        Matrix l(b.field(), n, n);
        for (size_t j = 0; j < n; ++j)
            for (size_t k = 0; k < n; ++k) l(k, j) = b.product(i, j)[k];
        act.push_back(std::move(l));
    }
    return LeftModule(b, act);
}

LeftModule column_module(const GradedAlgebra& m2) {
    if (m2.dim() != 4) throw Error(ErrorCode::DimensionMismatch, "column module needs the 2x2 matrix algebra");
    std::vector<Matrix> act;
    for (size_t a = 0; a < 2; ++a)
        for (size_t b = 0; b < 2; ++b) {
            Matrix m(m2.field(), 2, 2);
            m(a, b) = m2.field().one();
            act.push_back(m);
        }
    return LeftModule(m2, act);
}

GradedBimodule hom_bimodule(const GradedAlgebra& b, const LeftModule& m, const LeftModule& n) {
    if (!b.concentrated_in_degree_zero()) throw Error(ErrorCode::InvalidArgument, "Hom bimodule needs an ungraded algebra");
    size_t dm = m.dim(), dn = n.dim(), dim = dm * dn;
    std::vector<std::string> names;
    for (size_t r = 0; r < dn; ++r)
        for (size_t c = 0; c < dm; ++c) names.push_back("phi" + std::to_string(r) + "_" + std::to_string(c));
    std::vector<Matrix> left, right;
    for (size_t i = 0; i < b.dim(); ++i) {
        Matrix l(b.field(), dim, dim), rt(b.field(), dim, dim);
        for (size_t r = 0; r < dn; ++r)
            for (size_t c = 0; c < dm; ++c) {
                for (size_t s = 0; s < dn; ++s) l(s * dm + c, r * dm + c) = n.action(i)(s, r);
                for (size_t c2 = 0; c2 < dm; ++c2) rt(r * dm + c2, r * dm + c) = m.action(i)(c, c2);
            }
        left.push_back(std::move(l));
        right.push_back(std::move(rt));
    }
    return GradedBimodule(b, names, std::vector<int>(dim, 0), left, right);
}

// ---------------------------------------------------------------- bar complex

BarCochains::BarCochains(const GradedAlgebra& b, const GradedBimodule& m, int n, int j, bool normalized)
    : n_(n), j_(j), reps_(argument_basis(b, normalized)) {
    if (n < 0) throw Error(ErrorCode::InvalidArgument, "negative arity");
    if (m.algebra_dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "bimodule over another algebra");
    r_ = reps_.size();
    module_degree_ = m.degrees();
    pos_.resize(m.dim());
    for (size_t t = 0; t < m.dim(); ++t) {
        auto& slot = by_degree_[m.degree(t)];
        pos_[t] = slot.size();
        slot.push_back(t);
    }
    size_t count = ipow(r_, n);
    tuple_degree_.assign(count, 0);
    offset_.assign(count + 1, 0);
    for (size_t tid = 0; tid < count; ++tid) {
        int deg = 0;
        size_t rest = tid;
        for (int k = 0; k < n; ++k) {
            deg += b.degree(reps_[rest % r_]);
            rest /= r_;
        }
        tuple_degree_[tid] = deg;
        const auto* ts = targets(deg + j);
        offset_[tid + 1] = offset_[tid] + (ts ? ts->size() : 0);
    }
}

const std::vector<size_t>* BarCochains::targets(int degree) const {
    auto it = by_degree_.find(degree);
    return it == by_degree_.end() ? nullptr : &it->second;
}

size_t BarCochains::index(size_t tuple_id, size_t target) const {
    if (module_degree_.at(target) != tuple_degree_.at(tuple_id) + j_)
        throw Error(ErrorCode::Internal, "cochain target in the wrong degree");
    return offset_[tuple_id] + pos_[target];
}

std::optional<size_t> BarCochains::index(const std::vector<size_t>& tuple, size_t target) const {
    if (tuple.size() != size_t(n_)) return std::nullopt;
    size_t tid = 0;
    for (size_t a : tuple) {
        if (a >= r_) return std::nullopt;
        tid = tid * r_ + a;
    }
    if (target >= module_degree_.size() || module_degree_[target] != tuple_degree_[tid] + j_) return std::nullopt;
    return offset_[tid] + pos_[target];
}

std::vector<size_t> BarCochains::tuple(size_t tuple_id) const {
    std::vector<size_t> digits(static_cast<size_t>(n_));
    for (int k = n_ - 1; k >= 0; --k) {
        digits[size_t(k)] = tuple_id % r_;
        tuple_id /= r_;
    }
    return digits;
}

std::pair<size_t, size_t> BarCochains::locate(size_t idx) const {
    if (idx >= dim()) throw Error(ErrorCode::InvalidArgument, "cochain index out of range");
    size_t tid = size_t(std::upper_bound(offset_.begin(), offset_.end(), idx) - offset_.begin()) - 1;
    const auto* ts = targets(tuple_degree_[tid] + j_);
    return {tid, (*ts)[idx - offset_[tid]]};
}

std::string BarCochains::describe(size_t idx, const GradedAlgebra& b, const GradedBimodule& m) const {
    auto [tid, t] = locate(idx);
    std::string s = "(";
    auto digits = tuple(tid);
    for (size_t k = 0; k < digits.size(); ++k) s += (k ? "," : "") + b.names()[reps_[digits[k]]];
    return s + ") -> " + m.names()[t];
}

SparseMatrix hochschild_differential(const GradedAlgebra& b, const GradedBimodule& m, int n, int j, bool normalized) {
    if (b.has_nonzero_differential())
        throw Error(ErrorCode::InvalidArgument, "bar cohomology takes algebras without differential");
    BarCochains src(b, m, n, j, normalized), dst(b, m, n + 1, j, normalized);
    const auto& reps = src.arguments();
    size_t r = reps.size();
    auto into = merge_table(b, reps, normalized);
    std::vector<std::vector<SparseVec>> left(r), right(r);
    for (size_t x = 0; x < r; ++x)
        for (size_t t = 0; t < m.dim(); ++t) {
            left[x].push_back(to_sparse(m.left(reps[x]).column(t)));
            right[x].push_back(to_sparse(m.right(reps[x]).column(t)));
        }
    std::vector<size_t> pw(size_t(n) + 2, 1);
    for (size_t k = 1; k < pw.size(); ++k) pw[k] = pw[k - 1] * r;

    SparseMatrix d(b.field(), dst.dim(), src.dim());
    Accumulator acc;
    for (size_t col = 0; col < src.dim(); ++col) {
        auto [tid, t] = src.locate(col);
        auto a = src.tuple(tid);
        // r0 f(r1..rn), with the Koszul sign for moving f past r0
        for (size_t x = 0; x < r; ++x) {
            bool neg = (b.degree(reps[x]) * j) % 2 != 0;
            for (const auto& [s, v] : left[x][t]) acc.add(dst.index(x * pw[size_t(n)] + tid, s), signed_value(v, neg));
        }
        // (-1)^i f(r0, .., r_{i-1} r_i, .., rn)
        for (int k = 0; k < n; ++k) {
            size_t prefix = tid / pw[size_t(n - k)], suffix = tid % pw[size_t(n - k - 1)];
            bool neg = (k + 1) % 2 != 0;
            for (const auto& [x, y, c] : into[a[size_t(k)]]) {
                size_t t2 = ((prefix * r + x) * r + y) * pw[size_t(n - k - 1)] + suffix;
                acc.add(dst.index(t2, t), signed_value(c, neg));
            }
        }
        // (-1)^{n+1} f(r0..r_{n-1}) rn
        bool neg = (n + 1) % 2 != 0;
        for (size_t y = 0; y < r; ++y)
            for (const auto& [s, v] : right[y][t]) acc.add(dst.index(tid * r + y, s), signed_value(v, neg));
        d.column(col) = acc.take();
    }
    return d;
}

std::vector<int> internal_degree_range(const GradedAlgebra& b, const GradedBimodule& m, int n) {
    std::vector<int> out;
    if (m.dim() == 0) return out;
    auto reps = argument_basis(b, true);
    int lo_arg = 0, hi_arg = 0;
    if (n > 0) {
        if (reps.empty()) return out;
        int lo = b.degree(reps[0]), hi = lo;
        for (size_t x : reps) lo = std::min(lo, b.degree(x)), hi = std::max(hi, b.degree(x));
        lo_arg = n * lo, hi_arg = n * hi;
    }
    auto [mlo, mhi] = std::minmax_element(m.degrees().begin(), m.degrees().end());
    for (int j = *mlo - hi_arg; j <= *mhi - lo_arg; ++j) out.push_back(j);
    return out;
}

CohomologyReport bar_hh(const GradedAlgebra& b, const GradedBimodule& m, int n, std::optional<int> j,
                        const BarOptions& opt) {
    check_arity(n, opt.max_arity);
    require_characteristic(b.field(), opt.max_arity);
    if (!j) {
        CohomologyReport total;
        total.n = n;
        for (int jj : internal_degree_range(b, m, n)) {
            BarOptions o = opt;
            o.representatives = false;
            auto part = bar_hh(b, m, n, jj, o);
            total.cochain_dim += part.cochain_dim;
            total.cocycle_dim += part.cocycle_dim;
            total.coboundary_dim += part.coboundary_dim;
            total.rank += part.rank;
            total.d_squared_zero = total.d_squared_zero && part.d_squared_zero;
            if (part.cochain_dim > 0) total.rank_by_degree.push_back({jj, part.rank});
        }
        return total;
    }
    SparseMatrix d_out = hochschild_differential(b, m, n, *j, opt.normalized);
    SparseMatrix d_in = n > 0 ? hochschild_differential(b, m, n - 1, *j, opt.normalized)
                              : SparseMatrix(b.field(), d_out.cols(), 0);
    return make_report(n, j, std::move(d_in), std::move(d_out), opt.representatives);
}

std::string to_string(LiftMode m) {
    switch (m) {
        case LiftMode::lift_object: return "lift_object";
        case LiftMode::lift_morphism: return "lift_morphism";
        case LiftMode::faithful: return "faithful";
    }
    return "?";
}

LiftMode parse_lift_mode(const std::string& s) {
    if (s == "lift_object" || s == "lift-object") return LiftMode::lift_object;
    if (s == "lift_morphism" || s == "lift-morphism") return LiftMode::lift_morphism;
    if (s == "faithful") return LiftMode::faithful;
    throw Error(ErrorCode::InvalidArgument, "unknown mode '" + s + "'");
}

int first_degree(LiftMode m) {
    switch (m) {
        case LiftMode::lift_object: return 3;
        case LiftMode::lift_morphism: return 2;
        case LiftMode::faithful: return 1;
    }
    return 0;
}

int internal_degree_for(LiftMode m, int n) {
    switch (m) {
        case LiftMode::lift_object: return 2 - n;
        case LiftMode::lift_morphism: return 1 - n;
        case LiftMode::faithful: return -n;
    }
    return 0;
}

HHConditionReport hh_condition(const GradedAlgebra& hb, const GradedBimodule& e, LiftMode mode, int max_arity) {
    int cap = default_budgets().max_arity;
    if (max_arity > cap)
        throw Error(ErrorCode::ArityBudgetExceeded,
                    "requested arity " + std::to_string(max_arity) + " exceeds the budget " + std::to_string(cap));
    HHConditionReport rep;
    rep.mode = mode;
    rep.verified_to = max_arity;
    BarOptions opt;
    opt.max_arity = max_arity;
    for (int n = first_degree(mode); n <= max_arity; ++n) {
        auto r = bar_hh(hb, e, n, internal_degree_for(mode, n), opt);
        if (r.rank != 0) rep.holds = false;
        rep.entries.push_back(std::move(r));
    }
    return rep;
}

// ---------------------------------------------------------------- Ext via bar resolution

namespace {

SparseMatrix ext_differential(const GradedAlgebra& b, const LeftModule& m, const LeftModule& nm, int n,
                              bool normalized) {
    auto reps = argument_basis(b, normalized);
    size_t r = reps.size(), dm = m.dim(), dn = nm.dim();
    size_t src_tuples = ipow(r, n), dst_tuples = ipow(r, n + 1);
    auto into = merge_table(b, reps, normalized);
    auto idx = [&](size_t tid, size_t c, size_t row) { return (tid * dm + c) * dn + row; };
    SparseMatrix d(b.field(), dst_tuples * dm * dn, src_tuples * dm * dn);
    Accumulator acc;
    for (size_t tid = 0; tid < src_tuples; ++tid) {
        std::vector<size_t> a(static_cast<size_t>(n));
        for (size_t k = size_t(n), rest = tid; k-- > 0; rest /= r) a[k] = rest % r;
        for (size_t c = 0; c < dm; ++c)
            for (size_t row = 0; row < dn; ++row) {
                // b1 g(b2.., m)
                for (size_t x = 0; x < r; ++x)
                    for (size_t s = 0; s < dn; ++s) {
                        const auto& v = nm.action(reps[x])(s, row);
                        if (!v.is_zero()) acc.add(idx(x * src_tuples + tid, c, s), v);
                    }
                // (-1)^i g(.., b_i b_{i+1}, .., m)
                for (int k = 0; k < n; ++k) {
                    size_t tail = ipow(r, n - k - 1);
                    size_t prefix = tid / (tail * r), suffix = tid % tail;
                    bool neg = (k + 1) % 2 != 0;
                    for (const auto& [x, y, coef] : into[a[size_t(k)]])
                        acc.add(idx(((prefix * r + x) * r + y) * tail + suffix, c, row), signed_value(coef, neg));
                }
                // (-1)^{n+1} g(b1..bn, b_{n+1} m)
                bool neg = (n + 1) % 2 != 0;
                for (size_t y = 0; y < r; ++y)
                    for (size_t c2 = 0; c2 < dm; ++c2) {
                        const auto& v = m.action(reps[y])(c, c2);
                        if (!v.is_zero()) acc.add(idx(tid * r + y, c2, row), signed_value(v, neg));
                    }
                d.column(idx(tid, c, row)) = acc.take();
            }
    }
    return d;
}

}  // namespace

CohomologyReport ext_via_bar(const GradedAlgebra& b, const LeftModule& m, const LeftModule& n, int degree,
                             const BarOptions& opt) {
    check_arity(degree, opt.max_arity);
    require_characteristic(b.field(), opt.max_arity);
    if (!b.concentrated_in_degree_zero() || b.has_nonzero_differential())
        throw Error(ErrorCode::InvalidArgument, "Ext via the bar resolution needs an ungraded algebra");
    if (m.field() != b.field() || n.field() != b.field())
        throw Error(ErrorCode::DescriptorMismatch, "modules over another field");
    SparseMatrix d_out = ext_differential(b, m, n, degree, opt.normalized);
    SparseMatrix d_in = degree > 0 ? ext_differential(b, m, n, degree - 1, opt.normalized)
                                   : SparseMatrix(b.field(), d_out.cols(), 0);
    return make_report(degree, 0, std::move(d_in), std::move(d_out), opt.representatives);
}

// ---------------------------------------------------------------- Koszul complexes

KoszulBimodule::KoszulBimodule(Field l, size_t dim, std::vector<Matrix> delta)
    : f_(l), dim_(dim), delta_(std::move(delta)) {
    for (const auto& m : delta_) check_square(f_, m, dim_, "Koszul operator");
    for (size_t i = 0; i < delta_.size(); ++i)
        for (size_t j = i + 1; j < delta_.size(); ++j)
            if (delta_[i] * delta_[j] != delta_[j] * delta_[i])
                throw Error(ErrorCode::NonCommutingOperators,
                            "delta_" + std::to_string(i + 1) + " and delta_" + std::to_string(j + 1) + " do not commute");
}

KoszulBimodule KoszulBimodule::symmetric(Field l, int d, size_t dim) {
    return KoszulBimodule(l, dim, std::vector<Matrix>(size_t(d), Matrix(l, dim, dim)));
}

std::vector<std::vector<int>> koszul_subsets(int d, int n) {
    std::vector<std::vector<int>> out;
    if (n < 0 || n > d) return out;
    std::vector<int> s(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) s[size_t(i)] = i;
    while (true) {
        out.push_back(s);
        int i = n - 1;
        while (i >= 0 && s[size_t(i)] == d - n + i) --i;
        if (i < 0) break;
        ++s[size_t(i)];
        for (int k = i + 1; k < n; ++k) s[size_t(k)] = s[size_t(k - 1)] + 1;
    }
    return out;
}

Matrix koszul_differential(const KoszulBimodule& m, int n) {
    int d = m.d();
    if (n < 0 || n > d)
        throw Error(ErrorCode::DegreeTooLarge, "Koszul degree " + std::to_string(n) + " outside 0.." + std::to_string(d));
    auto src = koszul_subsets(d, n), dst = koszul_subsets(d, n + 1);
    std::map<std::vector<int>, size_t> where;
    for (size_t i = 0; i < dst.size(); ++i) where[dst[i]] = i;
    size_t dim = m.dim();
    Matrix out(m.field(), dst.size() * dim, src.size() * dim);
    for (size_t si = 0; si < src.size(); ++si) {
        const auto& s = src[si];
        for (int i = 0; i < d; ++i) {
            if (std::find(s.begin(), s.end(), i) != s.end()) continue;
            // e_i ^ e_S = (-1)^{#{s in S : s < i}} e_{S + i}
            int before = int(std::count_if(s.begin(), s.end(), [i](int x) { return x < i; }));
            auto t = s;
            t.insert(t.begin() + before, i);
            size_t ti = where.at(t);
            const Matrix& di = m.delta(i);
            for (size_t r = 0; r < dim; ++r)
                for (size_t c = 0; c < dim; ++c)
                    if (!di(r, c).is_zero()) out(ti * dim + r, si * dim + c) = before % 2 ? -di(r, c) : di(r, c);
        }
    }
    return out;
}

CohomologyReport koszul_hh(const KoszulBimodule& m, int n, bool representatives) {
    if (n < 0 || n > m.d())
        throw Error(ErrorCode::DegreeTooLarge, "Koszul degree " + std::to_string(n) + " outside 0.." + std::to_string(m.d()));
    Matrix d_out = koszul_differential(m, n);
    Matrix d_in = n > 0 ? koszul_differential(m, n - 1) : Matrix(m.field(), d_out.cols(), 0);
    return make_report(n, std::nullopt, SparseMatrix::from_dense(d_in), SparseMatrix::from_dense(d_out), representatives);
}

namespace {

void check_derivation_data(const KoszulBimodule& m, const std::vector<Vector>& e) {
    if (e.size() != size_t(m.d())) throw Error(ErrorCode::DimensionMismatch, "need one element per variable");
    for (const auto& v : e) check_vector(m.field(), v, m.dim(), "derivation value");
}

}  // namespace

bool derivation_check(const KoszulBimodule& m, const std::vector<Vector>& e) {
    check_derivation_data(m, e);
    for (int i = 0; i < m.d(); ++i)
        for (int j = i + 1; j < m.d(); ++j)
            if (m.delta(i).apply(e[size_t(j)]) != m.delta(j).apply(e[size_t(i)])) return false;
    return true;
}

std::optional<Vector> is_inner(const KoszulBimodule& m, const std::vector<Vector>& e) {
    if (!derivation_check(m, e)) throw Error(ErrorCode::NotADerivation, "delta_i(e_j) != delta_j(e_i)");
    size_t dim = m.dim();
    Matrix a(m.field(), size_t(m.d()) * dim, dim);
    Vector rhs;
    for (int i = 0; i < m.d(); ++i) {
        a.set_block(size_t(i) * dim, 0, m.delta(i));
        rhs.insert(rhs.end(), e[size_t(i)].begin(), e[size_t(i)].end());
    }
    if (m.d() == 0) return zero_vector(m.field(), dim);
    return solve(a, rhs);
}

}  // namespace xl
