#pragma once

// Dense exact linear algebra. Matrices act on column vectors.

#include <optional>
#include <string>
#include <vector>

#include "exactlift/field.hpp"

namespace xl {

using Vector = std::vector<FieldElement>;

class Matrix {
public:
    Matrix() = default;
    Matrix(Field f, size_t rows, size_t cols);
    static Matrix identity(Field f, size_t n);
    static Matrix from_rows(Field f, const std::vector<Vector>& rows, size_t cols = 0);
    static Matrix from_columns(Field f, const std::vector<Vector>& cols, size_t rows = 0);

    Field field() const { return f_; }
    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    FieldElement& operator()(size_t i, size_t j) { return a_[i * cols_ + j]; }
    const FieldElement& operator()(size_t i, size_t j) const { return a_[i * cols_ + j]; }

    Vector row(size_t i) const;
    Vector column(size_t j) const;
    Vector apply(const Vector& v) const;
    Matrix transpose() const;
    bool is_zero() const;
    bool operator==(const Matrix& o) const;

    // rows of `other` appended below / columns appended to the right
    Matrix stack(const Matrix& other) const;
    Matrix augment(const Matrix& other) const;
    Matrix block(size_t r0, size_t c0, size_t nr, size_t nc) const;
    void set_block(size_t r0, size_t c0, const Matrix& m);

    std::string to_string() const;

private:
    Field f_;
    size_t rows_ = 0, cols_ = 0;
    std::vector<FieldElement> a_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(const FieldElement& s, const Matrix& m);

Vector zero_vector(Field f, size_t n);
Vector unit_vector(Field f, size_t n, size_t i);
bool is_zero(const Vector& v);
Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator*(const FieldElement& s, const Vector& v);

struct Rref {
    Matrix r;
    std::vector<size_t> pivots;  // pivot column of each nonzero row
};

// Reduced row echelon form. Pivots: first nonzero entry scanning rows top to
// bottom within each column, columns left to right. Over function fields the
// elimination is fraction free on denominator-cleared rows.
Rref rref(const Matrix& m);

// A subspace of F^n held as the rows of a reduced echelon matrix.
class SubspaceBasis {
public:
    SubspaceBasis(Field f, size_t ambient) : f_(f), ambient_(ambient) {}
    static SubspaceBasis span(Field f, size_t ambient, const std::vector<Vector>& gens);

    Field field() const { return f_; }
    size_t ambient_dim() const { return ambient_; }
    size_t dim() const { return vectors_.size(); }
    const std::vector<Vector>& vectors() const { return vectors_; }
    const std::vector<size_t>& pivots() const { return pivots_; }
    // coordinates of v in the basis, empty if v is not in the span
    std::optional<Vector> coordinates(const Vector& v) const;
    bool contains(const Vector& v) const { return coordinates(v).has_value(); }

private:
    Field f_;
    size_t ambient_;
    std::vector<Vector> vectors_;
    std::vector<size_t> pivots_;
};

size_t rank(const Matrix& m);
SubspaceBasis kernel_basis(const Matrix& m);
SubspaceBasis image_basis(const Matrix& m);
// Canonical particular solution: free variables set to zero.
std::optional<Vector> solve(const Matrix& m, const Vector& b);
// Standard basis vectors at the coordinates not covered by the echelon
// image; they project to a basis of target/image.
SubspaceBasis cokernel_basis(const Matrix& m);

// target / image(m) with a reduction map to cokernel coordinates.
class Quotient {
public:
    explicit Quotient(const Matrix& m);
    size_t dim() const { return free_.size(); }
    size_t ambient_dim() const { return ambient_; }
    Vector representative(size_t k) const;
    // coordinates of the class of w in the representative basis
    Vector coordinates(const Vector& w) const;
    bool is_zero_class(const Vector& w) const { return is_zero(coordinates(w)); }

private:
    Field f_;
    size_t ambient_;
    SubspaceBasis image_;
    std::vector<size_t> free_;
};

}  // namespace xl
