#pragma once

// Umbrella header: exact impulse-observability analysis of descriptor
// systems E x' = A x, y = C x, straight from the original (E, A, C) data.

#include "impob/cli.hpp"
#include "impob/criteria.hpp"
#include "impob/descriptor.hpp"
#include "impob/errors.hpp"
#include "impob/float_rank.hpp"
#include "impob/frequency.hpp"
#include "impob/json_io.hpp"
#include "impob/matrix.hpp"
#include "impob/poly_matrix.hpp"
#include "impob/polynomial.hpp"
#include "impob/rational.hpp"
#include "impob/selftest.hpp"
#include "impob/weierstrass.hpp"
