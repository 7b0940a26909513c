#pragma once

// Column-sparse exact matrices and an incremental echelon form, used for the
// large but very sparse cochain differentials.

#include <map>
#include <optional>
#include <vector>

#include "exactlift/linalg.hpp"

namespace xl {

// sorted by index, no explicit zeros
using SparseVec = std::vector<std::pair<size_t, FieldElement>>;

void axpy(SparseVec& y, const FieldElement& a, const SparseVec& x);  // y += a x
SparseVec to_sparse(const Vector& v);
Vector to_dense(const SparseVec& v, Field f, size_t n);

class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(Field f, size_t rows, size_t cols) : f_(f), rows_(rows), cols_(cols), columns_(cols) {}
    static SparseMatrix from_dense(const Matrix& m);

    Field field() const { return f_; }
    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    const SparseVec& column(size_t j) const { return columns_[j]; }
    SparseVec& column(size_t j) { return columns_[j]; }
    // adds to an entry, keeping the column sorted
    void add(size_t i, size_t j, const FieldElement& v);
    SparseVec apply(const SparseVec& x) const;
    Matrix to_dense() const;
    bool is_zero() const;
    size_t nonzeros() const;

private:
    Field f_;
    size_t rows_ = 0, cols_ = 0;
    std::vector<SparseVec> columns_;
};

SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b);

// Echelon basis of a span, built one vector at a time. With tracking, every
// basis vector remembers its combination of the inserted vectors, so
// membership tests can return explicit preimages.
class SparseEchelon {
public:
    SparseEchelon(Field f, bool track = false) : f_(f), track_(track) {}
    // returns true when v was independent of the current span
    bool insert(const SparseVec& v);
    size_t rank() const { return rows_.size(); }
    size_t inserted() const { return count_; }
    // v minus its projection onto the span along the pivots
    SparseVec reduce(const SparseVec& v) const;
    bool contains(const SparseVec& v) const { return reduce(v).empty(); }
    // coefficients c (indexed by insertion order) with sum c_k v_k = v
    std::optional<SparseVec> express(const SparseVec& v) const;

private:
    struct Row {
        SparseVec v, combo;
    };
    Field f_;
    bool track_;
    size_t count_ = 0;
    std::map<size_t, Row> rows_;  // keyed by pivot index, leading coefficient 1
};

size_t rank(const SparseMatrix& m);
// basis of the kernel (dense vectors in reduced echelon form)
SubspaceBasis kernel_basis(const SparseMatrix& m);
// some x with m x = b, or nothing
std::optional<Vector> solve(const SparseMatrix& m, const Vector& b);

}  // namespace xl
