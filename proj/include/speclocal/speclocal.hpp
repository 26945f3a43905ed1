#pragma once
// Umbrella header: the whole library in one include.

#include "types.hpp"
#include "rng.hpp"
#include "clifford.hpp"
#include "lattice.hpp"
#include "inertia.hpp"
#include "degree.hpp"
#include "models.hpp"
#include "localizer.hpp"
#include "symmetry.hpp"
#include "fuzzy.hpp"
