#include "exactlift/examples.hpp"

namespace xl {

Field generic_point_field() { return Field::function_field(Field::rationals(), {"x", "y", "z"}); }

namespace {

Matrix scalar(Field f, const FieldElement& x) {
    Matrix m(f, 1, 1);
    m(0, 0) = x;
    return m;
}

}  // namespace

QuiverRep threeloop_generic(Field L) {
    std::vector<Matrix> mats;
    for (int i = 0; i < 3; ++i) mats.push_back(scalar(L, L.variable(i)));
    return QuiverRep(Quiver::loops(3), L, {1}, mats);
}

QuiverRep kronecker_generic(Field L) {
    std::vector<Matrix> mats{scalar(L, L.one())};
    for (int i = 0; i < 3; ++i) mats.push_back(scalar(L, L.variable(i)));
    return QuiverRep(Quiver::kronecker(4), L, {1, 1}, mats);
}

QuiverRep kronecker_perp_object(Field f) {
    Quiver q = Quiver::kronecker(4);
    QuiverRep p1 = projective(q, f, 0), p2 = projective(q, f, 1);
    RepMorphism t = path_morphism(q, f, 1, 0, {0});
    return cokernel(p2, p1, t);
}

}  // namespace xl
