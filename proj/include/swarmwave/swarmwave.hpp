#pragma once

#include "swarmwave/geometry.hpp"
#include "swarmwave/hull.hpp"
#include "swarmwave/enclosing_circle.hpp"
#include "swarmwave/disc_graph.hpp"
#include "swarmwave/boundary.hpp"
#include "swarmwave/empty_circle.hpp"
#include "swarmwave/symmetry.hpp"
#include "swarmwave/gta.hpp"
#include "swarmwave/wave/egtm.hpp"
#include "swarmwave/wave/segment.hpp"
#include "swarmwave/wave/protocol.hpp"
#include "swarmwave/wave/local.hpp"
#include "swarmwave/sim/scenario.hpp"
#include "swarmwave/sim/generators.hpp"
#include "swarmwave/sim/audit.hpp"
#include "swarmwave/sim/run.hpp"
#include "swarmwave/io/scenario_io.hpp"
#include "swarmwave/io/trace_io.hpp"
#include "swarmwave/io/svg.hpp"
