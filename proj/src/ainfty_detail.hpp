#pragma once

// helpers shared by the A-infinity sources

#include <algorithm>
#include <tuple>
#include <vector>

#include "exactlift/error.hpp"
#include "exactlift/sparse.hpp"

namespace xl::detail {

inline FieldElement sign(Field f, long e) { return (e % 2 == 0) ? f.one() : -f.one(); }

// triplets (col, row, value) assembled into a column-sorted matrix
class Builder {
public:
    Builder(Field f, size_t rows, size_t cols) : f_(f), rows_(rows), cols_(cols) {}
    void add(size_t col, size_t row, FieldElement v) {
        if (!v.is_zero()) t_.emplace_back(col, row, std::move(v));
    }
    SparseMatrix build() {
        std::sort(t_.begin(), t_.end(), [](const auto& a, const auto& b) {
            return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
        });
        SparseMatrix m(f_, rows_, cols_);
        for (size_t i = 0; i < t_.size();) {
            size_t c = std::get<0>(t_[i]), r = std::get<1>(t_[i]);
            FieldElement s = std::get<2>(t_[i]);
            size_t k = i + 1;
            for (; k < t_.size() && std::get<0>(t_[k]) == c && std::get<1>(t_[k]) == r; ++k) s += std::get<2>(t_[k]);
            if (!s.is_zero()) m.column(c).emplace_back(r, std::move(s));
            i = k;
        }
        t_.clear();
        return m;
    }

private:
    Field f_;
    size_t rows_, cols_;
    std::vector<std::tuple<size_t, size_t, FieldElement>> t_;
};

inline void add_into(SparseMatrix& acc, const SparseMatrix& x, const FieldElement& c) {
    if (acc.rows() != x.rows() || acc.cols() != x.cols())
        throw Error(ErrorCode::Internal, "adding matrices of different shapes");
    for (size_t j = 0; j < x.cols(); ++j)
        if (!x.column(j).empty()) axpy(acc.column(j), c, x.column(j));
}

}  // namespace xl::detail
