#pragma once

// Umbrella header. The library is exact throughout: rational coefficients,
// shift-operator matrices, symbolic scheme derivation, and an exact periodic
// simulator for cross-validation.

#include "lbfd/rational.hpp"
#include "lbfd/shift_poly.hpp"
#include "lbfd/op_matrix.hpp"
#include "lbfd/scheme.hpp"
#include "lbfd/derive.hpp"
#include "lbfd/lattice.hpp"
#include "lbfd/equiv.hpp"
#include "lbfd/serialize.hpp"
