#pragma once

#include "quditlab/common.hpp"
#include "quditlab/basis.hpp"
#include "quditlab/gates.hpp"
#include "quditlab/circuit.hpp"
#include "quditlab/state.hpp"
#include "quditlab/dense.hpp"
#include "quditlab/classical.hpp"
#include "quditlab/build.hpp"
#include "quditlab/sim.hpp"
#include "quditlab/stats.hpp"
#include "quditlab/noise.hpp"
#include "quditlab/analysis.hpp"
#include "quditlab/json_io.hpp"
