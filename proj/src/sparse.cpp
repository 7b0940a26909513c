#include "exactlift/sparse.hpp"

#include <algorithm>

#include "exactlift/error.hpp"

namespace xl {

void axpy(SparseVec& y, const FieldElement& a, const SparseVec& x) {
    if (a.is_zero() || x.empty()) return;
    SparseVec out;
    out.reserve(y.size() + x.size());
    size_t i = 0, j = 0;
    while (i < y.size() || j < x.size()) {
        if (j == x.size() || (i < y.size() && y[i].first < x[j].first)) {
            out.push_back(std::move(y[i++]));
        } else if (i == y.size() || x[j].first < y[i].first) {
            out.push_back({x[j].first, a * x[j].second});
            ++j;
        } else {
            FieldElement s = y[i].second + a * x[j].second;
            if (!s.is_zero()) out.push_back({y[i].first, std::move(s)});
            ++i, ++j;
        }
    }
    y = std::move(out);
}

SparseVec to_sparse(const Vector& v) {
    SparseVec s;
    for (size_t i = 0; i < v.size(); ++i)
        if (!v[i].is_zero()) s.push_back({i, v[i]});
    return s;
}

Vector to_dense(const SparseVec& v, Field f, size_t n) {
    Vector d(n, f.zero());
    for (const auto& [i, x] : v) d.at(i) = x;
    return d;
}

SparseMatrix SparseMatrix::from_dense(const Matrix& m) {
    SparseMatrix s(m.field(), m.rows(), m.cols());
    for (size_t j = 0; j < m.cols(); ++j)
        for (size_t i = 0; i < m.rows(); ++i)
            if (!m(i, j).is_zero()) s.columns_[j].push_back({i, m(i, j)});
    return s;
}

void SparseMatrix::add(size_t i, size_t j, const FieldElement& v) {
    if (i >= rows_ || j >= cols_) throw Error(ErrorCode::DimensionMismatch, "sparse entry out of range");
    if (v.is_zero()) return;
    auto& col = columns_[j];
    auto it = std::lower_bound(col.begin(), col.end(), i, [](const auto& e, size_t k) { return e.first < k; });
    if (it != col.end() && it->first == i) {
        it->second += v;
        if (it->second.is_zero()) col.erase(it);
    } else {
        col.insert(it, {i, v});
    }
}

SparseVec SparseMatrix::apply(const SparseVec& x) const {
    SparseVec y;
    for (const auto& [j, a] : x) axpy(y, a, columns_.at(j));
    return y;
}

Matrix SparseMatrix::to_dense() const {
    Matrix m(f_, rows_, cols_);
    for (size_t j = 0; j < cols_; ++j)
        for (const auto& [i, x] : columns_[j]) m(i, j) = x;
    return m;
}

bool SparseMatrix::is_zero() const {
    for (const auto& c : columns_)
        if (!c.empty()) return false;
    return true;
}

size_t SparseMatrix::nonzeros() const {
    size_t n = 0;
    for (const auto& c : columns_) n += c.size();
    return n;
}

SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.cols() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "sparse product shape");
    SparseMatrix c(a.field(), a.rows(), b.cols());
    for (size_t j = 0; j < b.cols(); ++j) c.column(j) = a.apply(b.column(j));
    return c;
}

bool SparseEchelon::insert(const SparseVec& v) {
    SparseVec combo;
    if (track_) combo.push_back({count_, f_.one()});
    ++count_;
    SparseVec r = v;
    while (!r.empty()) {
        auto it = rows_.find(r.front().first);
        if (it == rows_.end()) break;
        FieldElement c = -r.front().second;
        axpy(r, c, it->second.v);
        if (track_) axpy(combo, c, it->second.combo);
    }
    if (r.empty()) return false;
    FieldElement inv = r.front().second.inv();
    for (auto& e : r) e.second *= inv;
    for (auto& e : combo) e.second *= inv;
    size_t key = r.front().first;
    rows_.emplace(key, Row{std::move(r), std::move(combo)});
    return true;
}

SparseVec SparseEchelon::reduce(const SparseVec& v) const {
    SparseVec r = v, out;
    while (!r.empty()) {
        auto it = rows_.find(r.front().first);
        if (it == rows_.end()) {
            // no pivot here: keep the entry and continue with the tail
            out.push_back(r.front());
            r.erase(r.begin());
            continue;
        }
        axpy(r, -r.front().second, it->second.v);
    }
    return out;
}

std::optional<SparseVec> SparseEchelon::express(const SparseVec& v) const {
    if (!track_) throw Error(ErrorCode::Internal, "express needs a tracking echelon");
    SparseVec r = v, combo;
    while (!r.empty()) {
        auto it = rows_.find(r.front().first);
        if (it == rows_.end()) return std::nullopt;
        FieldElement c = r.front().second;
        axpy(combo, c, it->second.combo);
        axpy(r, -c, it->second.v);
    }
    return combo;
}

size_t rank(const SparseMatrix& m) {
    SparseEchelon e(m.field());
    for (size_t j = 0; j < m.cols(); ++j) e.insert(m.column(j));
    return e.rank();
}

SubspaceBasis kernel_basis(const SparseMatrix& m) {
    // columns that are combinations of earlier columns give kernel vectors
    SparseEchelon e(m.field(), true);
    std::vector<Vector> gens;
    for (size_t j = 0; j < m.cols(); ++j) {
        auto combo = e.express(m.column(j));
        e.insert(m.column(j));
        if (!combo) continue;
        // insertion order == column order
        Vector v = to_dense(*combo, m.field(), m.cols());
        for (auto& x : v) x = -x;
        v[j] = m.field().one();
        gens.push_back(std::move(v));
    }
    return SubspaceBasis::span(m.field(), m.cols(), gens);
}

std::optional<Vector> solve(const SparseMatrix& m, const Vector& b) {
    SparseEchelon e(m.field(), true);
    for (size_t j = 0; j < m.cols(); ++j) e.insert(m.column(j));
    auto combo = e.express(to_sparse(b));
    if (!combo) return std::nullopt;
    return to_dense(*combo, m.field(), m.cols());
}

}  // namespace xl
