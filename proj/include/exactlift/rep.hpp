#pragma once

// Quiver representations over an exact field: Hom and Ext^1 as kernel and
// cokernel of the intertwiner-defect map, Schur and perpendicularity tests,
// stability witnesses and a finite-field enumeration oracle.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "exactlift/linalg.hpp"
#include "exactlift/quiver.hpp"

namespace xl {

class QuiverRep {
public:
    QuiverRep() = default;
    // mats[a] has shape dims[head(a)] x dims[tail(a)]
    QuiverRep(Quiver q, Field f, DimVector dims, std::vector<Matrix> mats);
    static QuiverRep zero(Quiver q, Field f, DimVector dims);
    static QuiverRep simple(Quiver q, Field f, int vertex);

    const Quiver& quiver() const { return q_; }
    Field field() const { return f_; }
    const DimVector& dims() const { return dims_; }
    long dim(int v) const { return dims_[v]; }
    long total_dim() const;
    const Matrix& mat(int a) const { return mats_[a]; }
    const std::vector<Matrix>& mats() const { return mats_; }
    bool operator==(const QuiverRep& o) const;

private:
    Quiver q_;
    Field f_;
    DimVector dims_;
    std::vector<Matrix> mats_;
};

// maps[i] : V_i -> W_i, shape dims_W[i] x dims_V[i]
struct RepMorphism {
    std::vector<Matrix> maps;
};

bool is_morphism(const QuiverRep& v, const QuiverRep& w, const RepMorphism& f);
RepMorphism compose(const RepMorphism& g, const RepMorphism& f);  // g after f

// Matrix of Phi : (+)_i Hom(V_i, W_i) -> (+)_a Hom(V_t(a), W_h(a)),
// (f_i) |-> (f_h(a) V_a - W_a f_t(a)). Coordinates are the row-major entries
// of each block, blocks in vertex (resp. arrow) order.
Matrix intertwiner_defect_map(const QuiverRep& v, const QuiverRep& w);

struct HomSpace {
    size_t dim = 0;
    std::vector<RepMorphism> basis;
};

HomSpace hom_space(const QuiverRep& v, const QuiverRep& w);

// Ext^1(V, W) = coker Phi, with representatives in (+)_a Hom(V_t(a), W_h(a)).
class ExtSpace {
public:
    ExtSpace(const QuiverRep& v, const QuiverRep& w);
    size_t dim() const { return quotient_.dim(); }
    // representative k as one matrix per arrow
    std::vector<Matrix> representative(size_t k) const;
    // coordinates of the class of an arbitrary arrow-indexed cochain
    Vector coordinates(const std::vector<Matrix>& cochain) const;
    Vector flatten(const std::vector<Matrix>& cochain) const;
    std::vector<Matrix> unflatten(const Vector& v) const;
    size_t cochain_dim() const { return quotient_.ambient_dim(); }

private:
    Field f_;
    std::vector<std::pair<size_t, size_t>> shapes_;
    Quotient quotient_;
};

ExtSpace ext_space(const QuiverRep& v, const QuiverRep& w);

bool is_schur(const QuiverRep& v);
bool perp_check(const QuiverRep& w, const QuiverRep& v);
// true iff W != 0, W perp V and codim(dim W) is a strictly negative multiple
// of lambda. Throws WeightNotOrthogonal when lambda . dim V != 0.
bool semistable_witness_check(const QuiverRep& w, const QuiverRep& v, const Weight& lambda);

enum class StabilityVerdict { stable, strictly_semistable, unstable };
std::string to_string(StabilityVerdict v);

struct StabilityResult {
    StabilityVerdict verdict;
    uint64_t subreps_examined = 0;
    // first subrepresentation violating (unstable) or attaining equality
    std::optional<DimVector> witness;
};

// Number of subspace tuples the oracle would examine.
uint64_t stability_enumeration_cost(const QuiverRep& v);
// Semistable iff lambda.beta >= lambda.alpha for every proper nonzero
// subrepresentation, stable iff strictly.
StabilityResult stability_bruteforce(const QuiverRep& v, const Weight& lambda, uint64_t budget);

QuiverRep specialize(const QuiverRep& v, const std::vector<FieldElement>& point);
QuiverRep extend_scalars(const QuiverRep& v, Field target);
QuiverRep direct_sum(const QuiverRep& a, const QuiverRep& b);
// change of basis g_i at each vertex: V_a -> g_h V_a g_t^{-1}
QuiverRep transport(const QuiverRep& v, const std::vector<Matrix>& g);

// Projective at vertex i: basis of (P_i)_j = paths from i to j. Acyclic only.
QuiverRep projective(const Quiver& q, Field f, int i);
// paths from i (as arrow index lists) in the basis order used by projective()
std::vector<std::vector<int>> paths_from(const Quiver& q, int i);
// P_j -> P_i given by right composition with a path from i to j
RepMorphism path_morphism(const Quiver& q, Field f, int j, int i, const std::vector<int>& path);
QuiverRep cokernel(const QuiverRep& source, const QuiverRep& target, const RepMorphism& f);

}  // namespace xl
