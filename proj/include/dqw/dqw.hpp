#pragma once

#include "dqw/cli.hpp"
#include "dqw/coin_solver.hpp"
#include "dqw/complex_matrix.hpp"
#include "dqw/continuum.hpp"
#include "dqw/engine.hpp"
#include "dqw/lattice.hpp"
#include "dqw/reference.hpp"
#include "dqw/scenario.hpp"
#include "dqw/serialize.hpp"
#include "dqw/walk.hpp"
