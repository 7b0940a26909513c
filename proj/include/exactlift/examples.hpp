#pragma once

// Concrete representations used by the test suites and the reproduction
// command.

#include "exactlift/rep.hpp"

namespace xl {

// QQ(x,y,z)
Field generic_point_field();
// one vertex, three loops acting as x, y, z on L
QuiverRep threeloop_generic(Field L);
// 4-Kronecker L -> L with arrows 1, x, y, z
QuiverRep kronecker_generic(Field L);
// coker(P_2 -> P_1) for the 4-Kronecker quiver, the map being the first arrow
QuiverRep kronecker_perp_object(Field f);

}  // namespace xl
