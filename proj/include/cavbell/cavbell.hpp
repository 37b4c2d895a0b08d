#pragma once

// Two-node heralded-entanglement simulator for birefringent emitter-cavity
// systems: single-excitation pulse dynamics, beam-splitter herald algebra,
// per-event local corrections, and the scenario/sweep drivers.

#include "cavbell/calibration.hpp"
#include "cavbell/config_io.hpp"
#include "cavbell/correction.hpp"
#include "cavbell/emission.hpp"
#include "cavbell/evolve.hpp"
#include "cavbell/hamiltonian.hpp"
#include "cavbell/herald.hpp"
#include "cavbell/integrate.hpp"
#include "cavbell/landscape.hpp"
#include "cavbell/lindblad.hpp"
#include "cavbell/output.hpp"
#include "cavbell/parallel.hpp"
#include "cavbell/params.hpp"
#include "cavbell/scenario.hpp"
#include "cavbell/time_grid.hpp"
#include "cavbell/tradeoff.hpp"
