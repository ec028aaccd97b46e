#pragma once

// Umbrella header for the whole library.

#include "ldps/basis.hpp"
#include "ldps/coefficients.hpp"
#include "ldps/config.hpp"
#include "ldps/control.hpp"
#include "ldps/errors.hpp"
#include "ldps/field.hpp"
#include "ldps/girsanov.hpp"
#include "ldps/grid.hpp"
#include "ldps/io.hpp"
#include "ldps/kernel.hpp"
#include "ldps/laplace.hpp"
#include "ldps/noise.hpp"
#include "ldps/parallel.hpp"
#include "ldps/presets.hpp"
#include "ldps/rate.hpp"
#include "ldps/representation.hpp"
#include "ldps/rng.hpp"
#include "ldps/skeleton.hpp"
#include "ldps/solver.hpp"
#include "ldps/tasks.hpp"
#include "ldps/version.hpp"
#include "ldps/walsh.hpp"
