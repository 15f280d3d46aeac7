#pragma once

// Umbrella header: the whole simulator in one include.

#include "qwalk/apparatus.hpp"
#include "qwalk/coin.hpp"
#include "qwalk/commands.hpp"
#include "qwalk/config.hpp"
#include "qwalk/csv.hpp"
#include "qwalk/density_state.hpp"
#include "qwalk/distribution.hpp"
#include "qwalk/envelope.hpp"
#include "qwalk/escape.hpp"
#include "qwalk/evolve.hpp"
#include "qwalk/fit.hpp"
#include "qwalk/pure_state.hpp"
#include "qwalk/schedule.hpp"
#include "qwalk/statistics.hpp"
#include "qwalk/tolerances.hpp"
#include "qwalk/trajectories.hpp"
#include "qwalk/version.hpp"
