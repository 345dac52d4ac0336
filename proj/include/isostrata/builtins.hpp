#pragma once

#include <string>
#include <vector>

#include "isostrata/algebra.hpp"

namespace isostrata {

/// Names accepted by builtin_description.
std::vector<std::string> builtin_names();

/// Shipped group descriptions:
///   so11          SO(1,1) on R^2
///   so22          SO(2,2) on R^4, form diag(1,1,-1,-1), with the swap
///                 k0 = [[0,-I],[I,0]] of SO(4) as ambient representative
///   sl2r-adjoint  SL_2(R) on sl_2(R) = R^3, Weyl element as normalizer rep
///   sl2c-adjoint  SL_2(C) on sl_2(C) = R^6 (realified)
///   so2-rotation  SO(2) on R^2
/// Throws Error for unknown names.
GroupDescription builtin_description(const std::string& name);

/// Coordinates of a real traceless 2x2 matrix in the orthonormal basis used
/// by sl2r-adjoint: diag(1,-1)/sqrt2, [[0,1],[1,0]]/sqrt2, [[0,-1],[1,0]]/sqrt2.
Vec sl2_coords(const Mat& m);
Mat sl2_matrix(const Vec& coords);

}  // namespace isostrata
