#include "exactlift/linalg.hpp"

#include "exactlift/error.hpp"

namespace xl {

Matrix::Matrix(Field f, size_t rows, size_t cols) : f_(f), rows_(rows), cols_(cols), a_(rows * cols, f.zero()) {}

Matrix Matrix::identity(Field f, size_t n) {
    Matrix m(f, n, n);
    for (size_t i = 0; i < n; ++i) m(i, i) = f.one();
    return m;
}

Matrix Matrix::from_rows(Field f, const std::vector<Vector>& rows, size_t cols) {
    if (!rows.empty()) cols = rows[0].size();
    Matrix m(f, rows.size(), cols);
    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw Error(ErrorCode::DimensionMismatch, "ragged rows");
        for (size_t j = 0; j < cols; ++j) {
            if (!(rows[i][j].field() == f)) throw Error(ErrorCode::DescriptorMismatch, "matrix entry field");
            m(i, j) = rows[i][j];
        }
    }
    return m;
}

Matrix Matrix::from_columns(Field f, const std::vector<Vector>& cols, size_t rows) {
    return from_rows(f, cols, rows).transpose();
}

Vector Matrix::row(size_t i) const { return Vector(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_); }

Vector Matrix::column(size_t j) const {
    Vector v;
    v.reserve(rows_);
    for (size_t i = 0; i < rows_; ++i) v.push_back((*this)(i, j));
    return v;
}

Vector Matrix::apply(const Vector& v) const {
    if (v.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "matrix-vector shape");
    Vector out(rows_, f_.zero());
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j)
            if (!(*this)(i, j).is_zero() && !v[j].is_zero()) out[i] += (*this)(i, j) * v[j];
    return out;
}

Matrix Matrix::transpose() const {
    Matrix t(f_, cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

bool Matrix::is_zero() const {
    for (const auto& x : a_)
        if (!x.is_zero()) return false;
    return true;
}

bool Matrix::operator==(const Matrix& o) const {
    return f_ == o.f_ && rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
}

Matrix Matrix::stack(const Matrix& o) const {
    if (cols_ != o.cols_) throw Error(ErrorCode::DimensionMismatch, "stack: column counts differ");
    Matrix m(f_, rows_ + o.rows_, cols_);
    m.set_block(0, 0, *this);
    m.set_block(rows_, 0, o);
    return m;
}

Matrix Matrix::augment(const Matrix& o) const {
    if (rows_ != o.rows_) throw Error(ErrorCode::DimensionMismatch, "augment: row counts differ");
    Matrix m(f_, rows_, cols_ + o.cols_);
    m.set_block(0, 0, *this);
    m.set_block(0, cols_, o);
    return m;
}

Matrix Matrix::block(size_t r0, size_t c0, size_t nr, size_t nc) const {
    Matrix m(f_, nr, nc);
    for (size_t i = 0; i < nr; ++i)
        for (size_t j = 0; j < nc; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
    return m;
}

void Matrix::set_block(size_t r0, size_t c0, const Matrix& m) {
    if (r0 + m.rows_ > rows_ || c0 + m.cols_ > cols_) throw Error(ErrorCode::DimensionMismatch, "block out of range");
    for (size_t i = 0; i < m.rows_; ++i)
        for (size_t j = 0; j < m.cols_; ++j) (*this)(r0 + i, c0 + j) = m(i, j);
}

std::string Matrix::to_string() const {
    std::string s = "[";
    for (size_t i = 0; i < rows_; ++i) {
        s += i ? ", [" : "[";
        for (size_t j = 0; j < cols_; ++j) s += (j ? ", " : "") + (*this)(i, j).to_string();
        s += "]";
    }
    return s + "]";
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "matrix product shape");
    Matrix c(a.field(), a.rows(), b.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t k = 0; k < a.cols(); ++k) {
            if (a(i, k).is_zero()) continue;
            for (size_t j = 0; j < b.cols(); ++j)
                if (!b(k, j).is_zero()) c(i, j) += a(i, k) * b(k, j);
        }
    return c;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error(ErrorCode::DimensionMismatch, "matrix sum shape");
    Matrix c = a;
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) c(i, j) += b(i, j);
    return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) { return a + (-a.field().one()) * b; }

Matrix operator*(const FieldElement& s, const Matrix& m) {
    Matrix c = m;
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) c(i, j) *= s;
    return c;
}

Vector zero_vector(Field f, size_t n) { return Vector(n, f.zero()); }

Vector unit_vector(Field f, size_t n, size_t i) {
    Vector v(n, f.zero());
    v[i] = f.one();
    return v;
}

bool is_zero(const Vector& v) {
    for (const auto& x : v)
        if (!x.is_zero()) return false;
    return true;
}

Vector operator+(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "vector sum");
    Vector c = a;
    for (size_t i = 0; i < a.size(); ++i) c[i] += b[i];
    return c;
}

Vector operator-(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "vector difference");
    Vector c = a;
    for (size_t i = 0; i < a.size(); ++i) c[i] -= b[i];
    return c;
}

Vector operator*(const FieldElement& s, const Vector& v) {
    Vector c = v;
    for (auto& x : c) x *= s;
    return c;
}

// ---- elimination ----

namespace {

Rref rref_generic(const Matrix& m) {
    Rref out{m, {}};
    Matrix& R = out.r;
    size_t row = 0;
    for (size_t c = 0; c < R.cols() && row < R.rows(); ++c) {
        size_t p = row;
        while (p < R.rows() && R(p, c).is_zero()) ++p;
        if (p == R.rows()) continue;
        if (p != row)
            for (size_t j = c; j < R.cols(); ++j) std::swap(R(p, j), R(row, j));
        FieldElement inv = R(row, c).inv();
        for (size_t j = c; j < R.cols(); ++j)
            if (!R(row, j).is_zero()) R(row, j) *= inv;
        for (size_t i = 0; i < R.rows(); ++i) {
            if (i == row || R(i, c).is_zero()) continue;
            FieldElement f = R(i, c);
            for (size_t j = c; j < R.cols(); ++j)
                if (!R(row, j).is_zero()) R(i, j) -= f * R(row, j);
        }
        out.pivots.push_back(c);
        ++row;
    }
    return out;
}

using PolyRow = std::vector<Poly>;

void make_primitive(PolyRow& r, const Coeffs& K) {
    Poly g;
    for (const auto& x : r) {
        if (x.is_zero()) continue;
        g = gcd(g, x, K);
        if (g.is_one()) return;
    }
    if (g.is_zero() || g.is_one()) return;
    for (auto& x : r)
        if (!x.is_zero()) x = exact_div(x, g, K);
}

Rref rref_fraction_free(const Matrix& m) {
    Field f = m.field();
    Coeffs K = f.coeffs();
    size_t nr = m.rows(), nc = m.cols();
    std::vector<PolyRow> P(nr, PolyRow(nc));
    for (size_t i = 0; i < nr; ++i) {
        Poly l = Poly::constant(1);
        for (size_t j = 0; j < nc; ++j) {
            const Poly& d = m(i, j).denominator();
            if (m(i, j).is_zero() || d.is_one()) continue;
            l = mul(l, exact_div(d, gcd(l, d, K), K), K);
        }
        for (size_t j = 0; j < nc; ++j) {
            if (m(i, j).is_zero()) continue;
            P[i][j] = mul(m(i, j).numerator(), exact_div(l, m(i, j).denominator(), K), K);
        }
        make_primitive(P[i], K);
    }
    std::vector<size_t> pivots;
    size_t row = 0;
    for (size_t c = 0; c < nc && row < nr; ++c) {
        size_t p = row;
        while (p < nr && P[p][c].is_zero()) ++p;
        if (p == nr) continue;
        std::swap(P[p], P[row]);
        for (size_t i = 0; i < nr; ++i) {
            if (i == row || P[i][c].is_zero()) continue;
            Poly g = gcd(P[row][c], P[i][c], K);
            Poly a = exact_div(P[row][c], g, K), b = exact_div(P[i][c], g, K);
            for (size_t j = 0; j < nc; ++j) {
                Poly t = P[i][j].is_zero() ? Poly() : mul(a, P[i][j], K);
                if (!P[row][j].is_zero()) t = sub(t, mul(b, P[row][j], K), K);
                P[i][j] = std::move(t);
            }
            make_primitive(P[i], K);
        }
        pivots.push_back(c);
        ++row;
    }
    Rref out{Matrix(f, nr, nc), pivots};
    for (size_t i = 0; i < pivots.size(); ++i) {
        const Poly& piv = P[i][pivots[i]];
        for (size_t j = 0; j < nc; ++j)
            if (!P[i][j].is_zero()) out.r(i, j) = FieldElement::canonicalize(f, P[i][j], piv);
    }
    return out;
}

}  // namespace

Rref rref(const Matrix& m) { return m.field().is_function_field() ? rref_fraction_free(m) : rref_generic(m); }

size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

SubspaceBasis SubspaceBasis::span(Field f, size_t ambient, const std::vector<Vector>& gens) {
    SubspaceBasis s(f, ambient);
    if (gens.empty()) return s;
    Rref e = rref(Matrix::from_rows(f, gens, ambient));
    for (size_t i = 0; i < e.pivots.size(); ++i) s.vectors_.push_back(e.r.row(i));
    s.pivots_ = e.pivots;
    return s;
}

std::optional<Vector> SubspaceBasis::coordinates(const Vector& v) const {
    if (v.size() != ambient_) throw Error(ErrorCode::DimensionMismatch, "coordinates: ambient dimension");
    Vector coords;
    Vector r = v;
    for (size_t k = 0; k < vectors_.size(); ++k) {
        FieldElement c = v[pivots_[k]];
        coords.push_back(c);
        if (!c.is_zero()) r = r - c * vectors_[k];
    }
    if (!is_zero(r)) return std::nullopt;
    return coords;
}

SubspaceBasis kernel_basis(const Matrix& m) {
    Field f = m.field();
    Rref e = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : e.pivots) is_pivot[p] = true;
    std::vector<Vector> gens;
    for (size_t fc = 0; fc < m.cols(); ++fc) {
        if (is_pivot[fc]) continue;
        Vector v = unit_vector(f, m.cols(), fc);
        for (size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.r(r, fc);
        gens.push_back(std::move(v));
    }
    return SubspaceBasis::span(f, m.cols(), gens);
}

SubspaceBasis image_basis(const Matrix& m) {
    std::vector<Vector> cols;
    for (size_t j = 0; j < m.cols(); ++j) cols.push_back(m.column(j));
    return SubspaceBasis::span(m.field(), m.rows(), cols);
}

std::optional<Vector> solve(const Matrix& m, const Vector& b) {
    if (b.size() != m.rows()) throw Error(ErrorCode::DimensionMismatch, "solve: right-hand side length");
    Field f = m.field();
    Matrix aug = m.augment(Matrix::from_columns(f, {b}, m.rows()));
    Rref e = rref(aug);
    if (!e.pivots.empty() && e.pivots.back() == m.cols()) return std::nullopt;
    Vector x = zero_vector(f, m.cols());
    for (size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = e.r(r, m.cols());
    return x;
}

SubspaceBasis cokernel_basis(const Matrix& m) {
    Quotient q(m);
    std::vector<Vector> reps;
    for (size_t k = 0; k < q.dim(); ++k) reps.push_back(q.representative(k));
    return SubspaceBasis::span(m.field(), m.rows(), reps);
}

Quotient::Quotient(const Matrix& m) : f_(m.field()), ambient_(m.rows()), image_(image_basis(m)) {
    std::vector<bool> covered(ambient_, false);
    for (auto p : image_.pivots()) covered[p] = true;
    for (size_t i = 0; i < ambient_; ++i)
        if (!covered[i]) free_.push_back(i);
}

Vector Quotient::representative(size_t k) const { return unit_vector(f_, ambient_, free_.at(k)); }

Vector Quotient::coordinates(const Vector& w) const {
    if (w.size() != ambient_) throw Error(ErrorCode::DimensionMismatch, "quotient: ambient dimension");
    Vector r = w;
    const auto& vs = image_.vectors();
    for (size_t k = 0; k < vs.size(); ++k) {
        FieldElement c = r[image_.pivots()[k]];
        if (!c.is_zero()) r = r - c * vs[k];
    }
    Vector out;
    out.reserve(free_.size());
    for (auto i : free_) out.push_back(r[i]);
    return out;
}

}  // namespace xl
