#pragma once

// A-infinity structures held through their Taylor coefficients on the bar
// construction: b_n : (sA)^n -> sA for algebras, b_{M,n} : (sA)^{n-1} (x) M -> M
// for modules, psi_n for morphisms and h_n for homotopies. The coalgebra BA
// itself is never built; every identity is checked arity by arity.
//
// Conventions: sa has degree |a| - 1, b_n = -s m_n (s^{-1})^{(x)n} with the
// Koszul rule, so b_1(sa) = -s m_1(a) and b_2(sa, sb) = (-1)^{|a|} s m_2(a, b).
// A DG module (M, d, .) has b_{M,1} = d and b_{M,2}(sa, m) = a.m.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "exactlift/config.hpp"
#include "exactlift/hochschild.hpp"
#include "exactlift/linalg.hpp"
#include "exactlift/rng.hpp"
#include "exactlift/sparse.hpp"

namespace xl {

class GradedSpace {
public:
    GradedSpace() = default;
    GradedSpace(std::vector<std::string> names, std::vector<int> degrees);
    size_t dim() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<int>& degrees() const { return degrees_; }
    int degree(size_t i) const { return degrees_.at(i); }
    // the suspension s: names prefixed with "s", degrees lowered by one
    GradedSpace shifted() const;
    bool operator==(const GradedSpace& o) const { return names_ == o.names_ && degrees_ == o.degrees_; }

private:
    std::vector<std::string> names_;
    std::vector<int> degrees_;
};

// Arity-indexed multilinear components. Algebra shape: component n is a map
// bar^(x)n -> target. Module shape: bar^(x)(n-1) (x) module -> target. Source
// tuples are numbered in mixed radix, first factor most significant, so a
// component is a (target dim) x (source count) matrix.
class TaylorMap {
public:
    TaylorMap() = default;
    TaylorMap(Field f, GradedSpace bar, std::optional<GradedSpace> module, GradedSpace target, int degree,
              int max_arity, int degree_slope = 0);

    Field field() const { return f_; }
    const GradedSpace& bar() const { return *bar_; }
    bool is_module_shape() const { return bool(module_); }
    const GradedSpace& module() const;
    const GradedSpace& target() const { return *target_; }
    int max_arity() const { return max_arity_; }
    // degree of component n: degree + slope * n
    int degree(int n) const { return degree_ + slope_ * n; }
    int base_degree() const { return degree_; }
    int degree_slope() const { return slope_; }

    size_t source_size(int n) const;
    size_t factor_dim(int n, int position) const;
    int factor_degree(int n, int position, size_t index) const;
    std::vector<size_t> decode(int n, size_t col) const;
    size_t encode(const std::vector<size_t>& digits) const;
    int source_degree(int n, size_t col) const;

    // set components; entries must respect the degree of the component
    void set(int n, SparseMatrix m);
    void set_dense(int n, const Matrix& m) { set(n, SparseMatrix::from_dense(m)); }
    void erase(int n) { comps_.erase(n); }
    // nullptr when the component is zero; throws ArityBudgetExceeded above max_arity
    const SparseMatrix* find(int n) const;
    // zero matrix of the right shape when absent
    SparseMatrix component(int n) const;
    std::vector<int> arities() const;
    // same shape, no components
    TaylorMap empty_like(int degree, int degree_slope = 0) const;
    // components above n dropped: the map psi_{<=n}
    TaylorMap truncated(int n) const;
    void set_max_arity(int n) { max_arity_ = n; }
    // sum of two maps of the same shape and degree
    TaylorMap plus(const TaylorMap& o, const FieldElement& c) const;
    bool is_zero_up_to(int n) const;

private:
    Field f_;
    std::shared_ptr<const GradedSpace> bar_, module_, target_;
    int degree_ = 0, slope_ = 0, max_arity_ = 0;
    std::map<int, SparseMatrix> comps_;
};

// b_n from m_n (components of degree 2 - n) and back; the sign is an involution
TaylorMap shift_signs(const TaylorMap& m);
TaylorMap unshift(const TaylorMap& b);

class AInftyAlgebra {
public:
    AInftyAlgebra(Field f, GradedSpace space, TaylorMap b, std::optional<size_t> unit = {});
    // m_1 = differential, m_2 = product; all higher components zero
    static AInftyAlgebra from_dg(const GradedAlgebra& a, int max_arity = default_budgets().max_arity);
    static AInftyAlgebra from_operations(Field f, GradedSpace space, const TaylorMap& m,
                                         std::optional<size_t> unit = {});

    Field field() const { return f_; }
    const GradedSpace& space() const { return space_; }
    size_t dim() const { return space_.dim(); }
    const TaylorMap& b() const { return b_; }
    int max_arity() const { return b_.max_arity(); }
    std::optional<size_t> unit() const { return unit_; }
    // b_2(s1, sx) = sx, b_2(sx, s1) = (-1)^{|x|} sx and no other component sees s1
    bool strict_unit_holds() const;

private:
    Field f_;
    GradedSpace space_;
    TaylorMap b_;
    std::optional<size_t> unit_;
};

class AInftyModule {
public:
    AInftyModule(AInftyAlgebra algebra, GradedSpace space, TaylorMap b);
    // a DG module: differential d and action[i] = action of the i-th basis element
    static AInftyModule from_dg(const AInftyAlgebra& algebra, GradedSpace space, const Matrix& d,
                                const std::vector<Matrix>& action);

    const AInftyAlgebra& algebra() const { return algebra_; }
    const GradedSpace& space() const { return space_; }
    size_t dim() const { return space_.dim(); }
    const TaylorMap& b() const { return b_; }
    int max_arity() const { return b_.max_arity(); }

private:
    AInftyAlgebra algebra_;
    GradedSpace space_;
    TaylorMap b_;
};

// ---------------------------------------------------------------- composition

// sum over admissible p and q of outer_{n-q+1} o (id^p (x) inner_q (x) id^r) on
// arity-n tuples, with the Koszul sign (-1)^{|inner_q| (degrees of the first p factors)}.
// An algebra-shaped inner lands in a bar slot; a module-shaped inner ends in
// the module slot.
SparseMatrix compose_insert(const TaylorMap& outer, const TaylorMap& inner, int n, std::optional<int> only_q = {});
// sum over compositions n = n_1 + .. + n_r of outer_r o (psi_{n_1} (x) .. (x) psi_{n_r});
// psi has degree 0, so no signs appear
SparseMatrix compose_morphism(const TaylorMap& outer, const TaylorMap& psi, int n);
// outer_r o (f_1 (x) .. (x) f_r) for algebra-shaped degree-0 maps of the given arities
SparseMatrix compose_tensor(const TaylorMap& outer, const std::vector<std::pair<const TaylorMap*, int>>& factors);

// [b_1, X] = b_{C,1} X - (-1)^{|X|} X (sum id (x) b_{A,1} (x) id) on arity n
SparseMatrix algebra_bracket(const AInftyAlgebra& a, const AInftyAlgebra& c, const TaylorMap& x, int n);
// (b_N X - (-1)^{|X|} X b_M)_n with every component of b_B, b_M, b_N
SparseMatrix module_bracket(const AInftyModule& m, const AInftyModule& n_mod, const TaylorMap& x, int n);
// the same, restricted to the arity-one parts b_{B,1}, b_{M,1}, b_{N,1}
SparseMatrix module_b1_bracket(const AInftyModule& m, const AInftyModule& n_mod, const TaylorMap& x, int n);

// The homogeneous entries of one component: (source tuple, target) pairs with
// target degree = source degree + degree.
class CochainSpace {
public:
    CochainSpace(const TaylorMap& shape, int arity, int degree);
    size_t dim() const { return offset_.back(); }
    int arity() const { return n_; }
    int degree() const { return degree_; }
    std::pair<size_t, size_t> entry(size_t k) const;  // (source column, target row)
    std::optional<size_t> index(size_t col, size_t row) const;
    Vector flatten(const SparseMatrix& m) const;
    SparseMatrix unflatten(const Vector& v) const;

private:
    int n_, degree_;
    size_t rows_, cols_;
    Field f_;
    std::vector<size_t> offset_;
    std::vector<int> col_degree_;
    std::map<int, std::vector<size_t>> by_degree_;
    std::vector<size_t> pos_;
    std::vector<int> row_degree_;
};

// Matrix of a linear operator on one component: column k is op applied to the
// k-th basis cochain of `from`, flattened in `to`.
SparseMatrix operator_matrix(const TaylorMap& shape, const CochainSpace& from, const CochainSpace& to,
                             const std::function<SparseMatrix(const TaylorMap&)>& op);

// ---------------------------------------------------------------- checks

struct Violation {
    int arity = 0;
    SparseMatrix residual;
    size_t nonzeros = 0;
};

// components of b o b on arities 1..n that do not vanish
std::vector<Violation> coderivation_square(const AInftyAlgebra& a, int n);
std::vector<Violation> module_square(const AInftyModule& m, int n);

struct Defect {
    TaylorMap d;         // D_1 .. D_{n+1}
    int top_arity = 0;   // n + 1
    bool top_closed = true;
};

// D = b_C psi_{<=n} - psi_{<=n} b_A. Throws DefectAtLowerArity when some D_m,
// m <= n, is nonzero.
Defect morphism_defect(const AInftyAlgebra& a, const AInftyAlgebra& c, const TaylorMap& psi, int n);
// the components D_1..D_n of b_C psi - psi b_A (no truncation)
TaylorMap morphism_residual(const AInftyAlgebra& a, const AInftyAlgebra& c, const TaylorMap& psi, int n);
TaylorMap module_morphism_residual(const AInftyModule& m, const AInftyModule& n_mod, const TaylorMap& f, int n);

// ---------------------------------------------------------------- cohomology

struct ComplexCohomology {
    Field field;
    GradedSpace space;                // one basis element per class
    std::vector<Vector> representatives;  // cocycles in the ambient basis
    // coordinates of the class of a cocycle; throws InvalidArgument otherwise
    Vector project(const Vector& cocycle) const;
    SparseVec project(const SparseVec& cocycle) const;

    std::shared_ptr<SparseEchelon> echelon;
    size_t boundary_count = 0;
    std::vector<size_t> rep_slot;  // insertion index of each representative
    size_t ambient = 0;
};

// cohomology of b_1 (algebras) or b_{M,1} (modules)
ComplexCohomology algebra_cohomology(const AInftyAlgebra& a);
ComplexCohomology module_cohomology(const AInftyModule& m);
// H*(A) with the product induced by m_2; the unit is found by solving
GradedAlgebra cohomology_algebra(const AInftyAlgebra& a, const ComplexCohomology& h);
// H*(C) as an H*(A)-bimodule through H*(phi)
GradedBimodule cohomology_bimodule(const AInftyAlgebra& a, const AInftyAlgebra& c, const Matrix& phi);
// Hom_k(H*M, H*N) with (a.f.a')(m) = a f(a' m), the coefficients for module obstructions
GradedBimodule cohomology_hom_bimodule(const AInftyModule& m, const AInftyModule& n_mod);

// ---------------------------------------------------------------- obstruction theory

struct ObstructionClass {
    int arity = 0;             // the Taylor arity whose equation fails
    int hochschild_degree = 0;
    int internal_degree = 0;
    // coordinates in the full (unnormalized) Hochschild cochains of H*, indexed as BarCochains
    Vector coordinates;
    std::vector<std::string> support;  // a few nonzero coordinates, described
    bool vanishing = false;
    bool closed = false;                // d_Hoch of the coordinates is zero
    size_t cochain_dim = 0;
    size_t coboundary_rank = 0;         // rank of d_Hoch into this cochain space
    size_t augmented_rank = 0;          // the same with the class adjoined
    size_t group_rank = 0;              // rank of the whole HH group (normalized complex)
};

struct LiftStep {
    int arity = 0;
    bool defect_zero = false;  // D_arity vanished before solving
    bool adjusted = false;     // the previous component was changed by a cocycle
    size_t unknowns = 0, equations = 0;
};

struct LiftOptions {
    int arity = default_budgets().max_arity;
    // when set, a seeded random kernel element is added to every solve
    std::optional<std::uint64_t> gauge_seed;
};

struct LiftResult {
    bool success = false;
    TaylorMap map;         // psi or f, components 1..verified_to
    int verified_to = 0;   // arities whose equation holds (re-verified)
    std::optional<ObstructionClass> obstruction;
    std::vector<LiftStep> steps;
};

// Extends psi_1 = phi (a chain map A -> C, matrix dim C x dim A) arity by arity.
// Throws NotCohomologyMultiplicative when H*(phi) is not a unital algebra map.
LiftResult lift_algebra_morphism(const AInftyAlgebra& a, const AInftyAlgebra& c, const Matrix& phi,
                                 const LiftOptions& opt = {});
// Extends f_1 (a chain map M -> N whose cohomology map is H*(B)-linear).
LiftResult lift_module_morphism(const AInftyModule& m, const AInftyModule& n_mod, const Matrix& f1,
                                const LiftOptions& opt = {});

struct NullhomotopyOptions {
    int arity = default_budgets().max_arity;
    // check the vanishing of HH^n(H*B, Hom(H*M, H*N))_{-n} first
    bool require_conditions = true;
};

struct NullhomotopyResult {
    TaylorMap h;
    int verified_to = 0;
    std::optional<HHConditionReport> conditions;
};

// h with g = b_N h + h b_M on arities up to opt.arity. Throws ObstructionNonzero
// when a needed class does not vanish.
NullhomotopyResult nullhomotopy(const AInftyModule& m, const AInftyModule& n_mod, const TaylorMap& g,
                                const NullhomotopyOptions& opt = {});

struct ModuleStructureResult {
    bool success = false;
    Matrix chain_action;  // dim(End M) x dim B: the chain map B -> End(M)
    bool given_action_used = false;
    LiftResult lift;      // the morphism B -> End(M)
    std::optional<AInftyModule> module;
    bool strictly_unital = false;
    std::optional<HHConditionReport> conditions;
};

// End(M) as a DG algebra, basis E{r}_{c} sending the c-th basis vector to the r-th
GradedAlgebra endomorphism_algebra(Field f, const GradedSpace& m, const Matrix& d);

// An A-infinity B-module structure on the complex (M, d) whose cohomology
// action is the one induced by action[i] (a map M -> M for each basis element
// of B). Throws NoChainLevelLift when no chain map B -> End(M) induces it.
ModuleStructureResult lift_module_structure(const AInftyAlgebra& b, const GradedSpace& m, const Matrix& d,
                                            const std::vector<Matrix>& action, const LiftOptions& opt = {});

// ---------------------------------------------------------------- fixtures

// The DG algebra 1, a, b, u, v (degree 1), p, q, w (degree 2) with ab = p = du,
// ba = q = dv, ua = w, av = sign w. With sign = +1 the Massey product <a, b, a>
// is 2w, which is not in the indeterminacy.
GradedAlgebra massey_algebra(Field k, int sign = 1);
// H*(massey_algebra): 1, a, b, w with all products of positive degree zero
GradedAlgebra massey_cohomology(Field k);
// the cocycle section H -> massey_algebra
Matrix massey_section(Field k);

// k + span{x, y}, |x| = -1, dx = y, square zero; quasi-isomorphic to k
GradedAlgebra acyclic_extension(Field k);
// M2(k) (x) acyclic_extension: cohomology M2(k)
GradedAlgebra matrix_dg_algebra(Field k);

// A DG algebra of upper triangular matrices over a random complex of dimension 3
GradedAlgebra random_triangular_dg(Field k, Rng& rng);

struct AlgebraMorphismFixture {
    std::string name;
    AInftyAlgebra a, c;
    Matrix phi;
};

struct ModuleFixture {
    std::string name;
    AInftyModule m, n;
    Matrix f1;
};

struct StructureFixture {
    std::string name;
    AInftyAlgebra b;
    GradedSpace space;
    Matrix d;
    std::vector<Matrix> action;
};

// F1: the Massey algebra mapped to itself by id + [d, sigma]
AlgebraMorphismFixture fixture_f1(Field k);
// F2: the cocycle section H*(massey) -> massey
AlgebraMorphismFixture fixture_f2(Field k, int sign = 1);
// F2 module variant: k m0 + k m2 over the Massey algebra with w m0 = m2 and a, b
// acting by zero; <a, b, a> = 2w cannot act nontrivially on such a module
StructureFixture fixture_f2_module(Field k);
// F3: k over k[e], mapped into a complex where e acts through a Toda bracket
ModuleFixture fixture_f3(Field k);
// F3 with free cohomology in the target, where g_1 is null-homotopic
ModuleFixture fixture_f3_faithful(Field k);
// F4: upper triangular 2x2 acting on a four-dimensional complex, action given
// by matrices that are not chain maps
StructureFixture fixture_f4(Field k);
// M2(k) into M2(k) (x) acyclic_extension, multiplicative only up to boundaries
AlgebraMorphismFixture fixture_matrix(Field k);

}  // namespace xl
