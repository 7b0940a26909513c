#pragma once

// Two-term objects Z = U + sV over a field L = k(x1..xd) carrying an L-action
// whose off-diagonal part phi21 : L -> Ext^1(U, V) is a derivation. Such an
// action comes from a genuine L-linear object exactly when phi21 is inner.

#include <optional>
#include <string>
#include <vector>

#include "exactlift/hochschild.hpp"
#include "exactlift/rep.hpp"

namespace xl {

// x_i acting on U and on V by commuting endomorphisms
struct FieldActions {
    std::vector<RepMorphism> on_u, on_v;
};

// x_i acting as the scalar x_i (the L-structure of an L-linear representation)
FieldActions scalar_actions(const QuiverRep& u, const QuiverRep& v);
void validate_actions(const QuiverRep& u, const QuiverRep& v, const FieldActions& a);

// Ext^1(U, V) as an L-bimodule: post_i composes with x_i on V, pre_i with x_i
// on U, and the Koszul operators are delta_i = post_i - pre_i.
struct ExtBimodule {
    ExtSpace ext;
    std::vector<Matrix> post, pre;
    KoszulBimodule koszul;
};

ExtBimodule ext_bimodule(const QuiverRep& u, const QuiverRep& v);
ExtBimodule ext_bimodule(const QuiverRep& u, const QuiverRep& v, const FieldActions& a);

// Hom(U, V) with the same two actions, in coordinates of an echelon basis of Hom
struct HomBimodule {
    SubspaceBasis hom;
    KoszulBimodule koszul;
};

HomBimodule hom_bimodule(const QuiverRep& u, const QuiverRep& v, const FieldActions& a);

class TwoStepObject {
public:
    // phi21[i] holds the Ext^1(U, V) coordinates of phi21(x_i)
    TwoStepObject(QuiverRep u, QuiverRep v, std::vector<Vector> phi21, std::optional<FieldActions> actions = {});
    const QuiverRep& u() const { return u_; }
    const QuiverRep& v() const { return v_; }
    const std::vector<Vector>& phi21() const { return phi21_; }
    const FieldActions& actions() const { return actions_; }
    bool scalar() const { return scalar_; }
    const ExtBimodule& bimodule() const { return ext_; }

private:
    QuiverRep u_, v_;
    std::vector<Vector> phi21_;
    FieldActions actions_;
    bool scalar_;
    ExtBimodule ext_;
};

enum class LiftVerdict { lifts, obstructed };
std::string to_string(LiftVerdict v);

// The unit pi = (pi11 0; pi21 pi22) of the two-term object, with scalar
// diagonal entries and pi21 in Ext^1(U, V).
struct UnitPi {
    FieldElement pi11, pi22;
    Vector pi21;
};

struct LiftCertificate {
    LiftVerdict verdict = LiftVerdict::obstructed;
    std::optional<Vector> witness;  // m with delta_i(m) = phi21(x_i)
    std::optional<UnitPi> unit;
    // rank of the stacked coboundary map L^e -> (L^e)^d, and of it augmented by phi21
    size_t coboundary_rank = 0;
    size_t augmented_rank = 0;
    // the class of phi21 in a basis of HH^1 (cocycles modulo coboundaries)
    std::vector<Vector> hh1_basis;
    Vector class_coordinates;
};

LiftCertificate lift_test(const TwoStepObject& z);
// recomputes every claim of the certificate from scratch
bool verify_certificate(const TwoStepObject& z, const LiftCertificate& c);
// phi21(x_i) = -pi22^{-1} pi21 pi11^{-1} phi11(x_i) pi11 + pi22^{-1} phi22(x_i) pi21
std::vector<Vector> rederive_phi21(const ExtBimodule& e, const UnitPi& pi);

TwoStepObject build_counterexample_threeloop();
TwoStepObject build_counterexample_kronecker4();

struct SummandReport {
    bool first_inner = false, second_inner = false, combined_inner = false;
    bool holds = false;  // combined inner iff both are
};

// Decides the class of the combined derivation on Z + Z' inside
// Ext^1(U + U', V + V') computed from scratch, and compares.
SummandReport summand_class_check(const TwoStepObject& z, const TwoStepObject& zp);

struct ExtHomRankRow {
    int i = 0;
    size_t ext_rank = 0;  // HH^{1+i}(L, Ext^1(U, V))
    size_t hom_rank = 0;  // HH^{3+i}(L, Hom(U, V))
    bool equal = false;
};

struct ExtHomRankReport {
    int d = 0;
    size_t ext_dim = 0, hom_dim = 0;
    std::vector<ExtHomRankRow> rows;
    bool pass = false;
};

// Koszul degrees beyond d count as rank 0 (the complex has length d).
ExtHomRankReport ext_hom_rank_check(const QuiverRep& u, const QuiverRep& v);
ExtHomRankReport ext_hom_rank_check(const QuiverRep& u, const QuiverRep& v, const FieldActions& a);

}  // namespace xl
