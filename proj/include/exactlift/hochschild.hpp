#pragma once

// Hochschild cohomology HH^n(B, M)_j of finite-dimensional graded algebras,
// computed from the normalized bar cochain complex, and HH^n(L, M) for a
// rational function field L = k(x1..xd) computed from the Koszul complex of
// the commuting operators delta_i = (left x_i) - (right x_i) on M. The second
// route is valid because x_i (x) 1 - 1 (x) x_i is a regular sequence
// generating the diagonal ideal of L (x)_k L.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "exactlift/config.hpp"
#include "exactlift/linalg.hpp"
#include "exactlift/sparse.hpp"

namespace xl {

class GradedAlgebra {
public:
    // products[i][j] holds the coordinates of e_i e_j
    GradedAlgebra(Field f, std::vector<std::string> names, std::vector<int> degrees, Vector unit,
                  std::vector<std::vector<Vector>> products, std::optional<Matrix> differential = {});

    Field field() const { return f_; }
    size_t dim() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<int>& degrees() const { return degrees_; }
    int degree(size_t i) const { return degrees_.at(i); }
    const Vector& unit() const { return unit_; }
    const Vector& product(size_t i, size_t j) const { return products_.at(i).at(j); }
    Vector multiply(const Vector& a, const Vector& b) const;
    const std::optional<Matrix>& differential() const { return differential_; }
    bool has_nonzero_differential() const { return differential_ && !differential_->is_zero(); }
    bool concentrated_in_degree_zero() const;
    // a basis index whose unit coordinate is nonzero; the remaining basis
    // vectors represent B / k.1
    size_t unit_pivot() const { return unit_pivot_; }
    // the class of x in B / k.1, in coordinates that leave the pivot at 0
    Vector reduce_mod_unit(const Vector& x) const;

private:
    Field f_;
    std::vector<std::string> names_;
    std::vector<int> degrees_;
    Vector unit_;
    std::vector<std::vector<Vector>> products_;
    std::optional<Matrix> differential_;
    size_t unit_pivot_ = 0;
};

GradedAlgebra ground_algebra(Field k);
// k[t]/(t^2) with t in the given internal degree
GradedAlgebra dual_numbers(Field k, int t_degree = 0);
// k[t]/(t^m)
GradedAlgebra truncated_polynomial(Field k, int m);
// basis e11, e12, e22
GradedAlgebra upper_triangular2(Field k);
// basis e11, e12, e21, e22
GradedAlgebra matrix_algebra2(Field k);

class GradedBimodule {
public:
    // left[i], right[i]: the action of the basis element e_i of B on M
    GradedBimodule(const GradedAlgebra& b, std::vector<std::string> names, std::vector<int> degrees,
                   std::vector<Matrix> left, std::vector<Matrix> right);

    Field field() const { return f_; }
    size_t dim() const { return names_.size(); }
    size_t algebra_dim() const { return left_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<int>& degrees() const { return degrees_; }
    int degree(size_t i) const { return degrees_.at(i); }
    const Matrix& left(size_t i) const { return left_.at(i); }
    const Matrix& right(size_t i) const { return right_.at(i); }

private:
    Field f_;
    std::vector<std::string> names_;
    std::vector<int> degrees_;
    std::vector<Matrix> left_, right_;
};

GradedBimodule regular_bimodule(const GradedAlgebra& b);
// k through an algebra map eps: B -> k (given on the basis), placed in one degree
GradedBimodule augmentation_bimodule(const GradedAlgebra& b, const Vector& eps, int degree = 0);

// An ungraded left module over an algebra concentrated in degree 0.
class LeftModule {
public:
    LeftModule(const GradedAlgebra& b, std::vector<Matrix> action);
    Field field() const { return f_; }
    size_t dim() const { return dim_; }
    const Matrix& action(size_t i) const { return action_.at(i); }

private:
    Field f_;
    size_t dim_;
    std::vector<Matrix> action_;
};

LeftModule augmentation_module(const GradedAlgebra& b, const Vector& eps);
LeftModule regular_module(const GradedAlgebra& b);
// k^2 with the matrix units of matrix_algebra2 acting naturally
LeftModule column_module(const GradedAlgebra& m2);

// Hom_k(M, N) with (b.phi.b')(m) = b phi(b' m); basis phi_{r,c} sends the
// c-th basis vector of M to the r-th of N, ordered by r then c.
GradedBimodule hom_bimodule(const GradedAlgebra& b, const LeftModule& m, const LeftModule& n);

struct CohomologyReport {
    int n = 0;
    std::optional<int> j;  // empty: all internal degrees together
    size_t cochain_dim = 0;
    size_t cocycle_dim = 0;
    size_t coboundary_dim = 0;
    size_t rank = 0;
    bool d_squared_zero = true;
    std::vector<std::pair<int, size_t>> rank_by_degree;  // filled when j is empty
    // incoming and outgoing differentials (single j only), so the data can be re-checked
    SparseMatrix d_in, d_out;
    // cocycles whose classes form a basis of the cohomology (on request)
    std::vector<Vector> representatives;
};

struct BarOptions {
    bool normalized = true;
    bool representatives = false;
    int max_arity = default_budgets().max_arity;
};

// The cochains C^n_j(B, M): multilinear maps B^n -> M raising degree by j
// (on B/k.1 when normalized). Indexed lexicographically by (argument tuple,
// target basis index).
class BarCochains {
public:
    BarCochains(const GradedAlgebra& b, const GradedBimodule& m, int n, int j, bool normalized = true);
    size_t dim() const { return offset_.back(); }
    int arity() const { return n_; }
    int internal_degree() const { return j_; }
    // basis indices of B allowed as arguments
    const std::vector<size_t>& arguments() const { return reps_; }
    size_t tuple_count() const { return offset_.size() - 1; }
    // index of the cochain sending the tuple (positions into arguments()) to target t
    std::optional<size_t> index(const std::vector<size_t>& tuple, size_t target) const;
    size_t index(size_t tuple_id, size_t target) const;
    std::vector<size_t> tuple(size_t tuple_id) const;
    std::pair<size_t, size_t> locate(size_t index) const;  // (tuple id, target)
    std::string describe(size_t index, const GradedAlgebra& b, const GradedBimodule& m) const;

private:
    int n_, j_;
    size_t r_;
    std::vector<size_t> reps_;
    std::vector<size_t> offset_;
    std::vector<int> tuple_degree_;
    std::map<int, std::vector<size_t>> by_degree_;  // module basis grouped by degree
    std::vector<size_t> pos_;                        // position of a module basis index in its group
    std::vector<int> module_degree_;
    const std::vector<size_t>* targets(int degree) const;
};

// d_Hoch: C^n_j -> C^{n+1}_j, with the Koszul sign (-1)^{|r0| j} on the left action term
SparseMatrix hochschild_differential(const GradedAlgebra& b, const GradedBimodule& m, int n, int j,
                                     bool normalized = true);

// internal degrees j where C^n_j or its neighbours can be nonzero
std::vector<int> internal_degree_range(const GradedAlgebra& b, const GradedBimodule& m, int n);

CohomologyReport bar_hh(const GradedAlgebra& b, const GradedBimodule& m, int n, std::optional<int> j,
                        const BarOptions& opt = {});

enum class LiftMode { lift_object, lift_morphism, faithful };
std::string to_string(LiftMode m);
LiftMode parse_lift_mode(const std::string& s);
int first_degree(LiftMode m);
int internal_degree_for(LiftMode m, int n);

struct HHConditionReport {
    bool holds = true;
    LiftMode mode = LiftMode::lift_object;
    int verified_to = 0;
    std::vector<CohomologyReport> entries;
};

HHConditionReport hh_condition(const GradedAlgebra& hb, const GradedBimodule& e, LiftMode mode,
                               int max_arity = default_budgets().max_arity);

// Ext^n_B(M, N) from the normalized bar resolution of M.
CohomologyReport ext_via_bar(const GradedAlgebra& b, const LeftModule& m, const LeftModule& n, int degree,
                             const BarOptions& opt = {});

class KoszulBimodule {
public:
    KoszulBimodule(Field l, size_t dim, std::vector<Matrix> delta);
    static KoszulBimodule symmetric(Field l, int d, size_t dim);
    Field field() const { return f_; }
    int d() const { return int(delta_.size()); }
    size_t dim() const { return dim_; }
    const Matrix& delta(int i) const { return delta_.at(size_t(i)); }

private:
    Field f_;
    size_t dim_;
    std::vector<Matrix> delta_;
};

// subsets of {0..d-1} of size n in lexicographic order
std::vector<std::vector<int>> koszul_subsets(int d, int n);
// K^n -> K^{n+1} with K^n = sum over |S| = n of M, ordered by (S, basis index)
Matrix koszul_differential(const KoszulBimodule& m, int n);
CohomologyReport koszul_hh(const KoszulBimodule& m, int n, bool representatives = false);
bool derivation_check(const KoszulBimodule& m, const std::vector<Vector>& e);
std::optional<Vector> is_inner(const KoszulBimodule& m, const std::vector<Vector>& e);

void require_characteristic(Field f, int max_arity);

}  // namespace xl
