#pragma once

#include "hdx/complex.hpp"

namespace hdx {

/// The 7-vertex triangulation of the torus (Moebius--Kantor): vertices
/// Z_7, faces {i, i+1, i+3} and {i, i+2, i+3}. 21 edges, 14 triangles.
Complex torus7();

/// Flag triangulation of the Moebius band on 9 vertices: clique complex of
/// the circulant graph C(9; 1, 2). 18 edges, 9 triangles, H^1(F_2) = F_2.
Complex moebius9();

/// Complete complex on n vertices (Delta_{n-1}).
Complex delta_on(std::size_t n);

}  // namespace hdx
