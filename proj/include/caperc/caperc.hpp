#pragma once

// Umbrella header for the color-avoiding percolation toolkit.

#include "caperc/census.hpp"
#include "caperc/connectivity.hpp"
#include "caperc/csv.hpp"
#include "caperc/edgelist.hpp"
#include "caperc/experiments.hpp"
#include "caperc/model.hpp"
#include "caperc/montecarlo.hpp"
#include "caperc/rng.hpp"
#include "caperc/svg.hpp"
#include "caperc/theory.hpp"
#include "caperc/version.hpp"
