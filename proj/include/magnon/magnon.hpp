#pragma once

#include "magnon/analytic.hpp"
#include "magnon/experiments.hpp"
#include "magnon/hamiltonian.hpp"
#include "magnon/io.hpp"
#include "magnon/lattice.hpp"
#include "magnon/observables.hpp"
#include "magnon/propagator.hpp"
#include "magnon/state.hpp"
