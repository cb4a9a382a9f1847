#pragma once

// Umbrella header: unitary- and hermitian-plus-low-rank matrix analysis.

#include "uplr/cayley.hpp"
#include "uplr/csv.hpp"
#include "uplr/factors.hpp"
#include "uplr/generators.hpp"
#include "uplr/kernels.hpp"
#include "uplr/matrix_market.hpp"
#include "uplr/nearest.hpp"
#include "uplr/random.hpp"
#include "uplr/recover.hpp"
#include "uplr/structure.hpp"
#include "uplr/types.hpp"
