#pragma once

// Umbrella header: bases of spin-coherent-state projectors on constellations
// of sphere directions — construction, spectral diagnostics, operator
// tomography, degeneracy repair, and the associated classical spin flow.

#include "spin.hpp"           // SpinLabel, UnitVector
#include "random.hpp"         // deterministic seeded streams
#include "spin_algebra.hpp"   // spin matrices, coherent states, Q-symbols
#include "constellation.hpp"  // constellations and generators
#include "gram.hpp"           // Gram matrix, diagnostics, solve
#include "tomography.hpp"     // sampling and reconstruction
#include "flow.hpp"           // determinant Hamiltonian and RK4 flow
#include "repair.hpp"         // budgeted repair of singular constellations
#include "io.hpp"             // JSON/CSV formats
