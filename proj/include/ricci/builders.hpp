#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ricci/graph.hpp"

// Named graph constructions. Vertex and edge numbering is part of the
// contract: tests and trajectory CSV columns refer to it.
namespace ricci::builders {

// 0 - 1 - ... - (n-1)
Graph path(std::size_t n);
// Edges (i, i+1 mod n) in order.
Graph cycle(std::size_t n);
// Center 0, leaves 1..k.
Graph star(std::size_t k);
Graph complete(std::size_t n);

// GP(n, k): outer cycle 0..n-1, spokes (i, n+i), inner edges (n+i, n+(i+k) mod n).
// Edge order: outer cycle, spokes, inner.
Graph generalized_petersen(std::size_t n, std::size_t k);

// Cycle C_a on 0..a-1, cycle C_b on a..a+b-1, bridge (0, a) as the last edge.
Graph dumbbell(std::size_t a, std::size_t b);

// Cycle C_a on 0..a-1 with a pendant path of b edges hanging off vertex 0.
Graph tadpole(std::size_t a, std::size_t b);

// Heawood graph: 14-cycle plus chords (i, i+5) for even i.
Graph heawood();

// Heawood graph (0..13), hexagon (14..19), bridge (3, 17).
Graph heawood_hexagon_dumbbell();

// GP(8,3) with edge (0,1) subdivided by a new vertex 16 and edge (5,6)
// deleted. The subdivision edges (0,16), (16,1) take the slot of (0,1).
Graph gp83_asymmetric();

// Builtin names accepted by the CLI.
const std::vector<std::string>& builtin_names();
// Throws ValidationError for an unknown name.
Graph builtin(std::string_view name);

}  // namespace ricci::builders
