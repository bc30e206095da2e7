#pragma once

// Umbrella header for the possibilistic portfolio choice toolkit.

#include "possport/allocation.hpp"
#include "possport/config.hpp"
#include "possport/errors.hpp"
#include "possport/fuzzy.hpp"
#include "possport/quadrature.hpp"
#include "possport/random_variable.hpp"
#include "possport/runner.hpp"
#include "possport/utility.hpp"
