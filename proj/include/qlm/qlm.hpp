#pragma once

// Umbrella header for the graph-geometry mass library.

#include "qlm/constants.hpp"
#include "qlm/linalg.hpp"
#include "qlm/quadrature.hpp"
#include "qlm/ode.hpp"
#include "qlm/parallel.hpp"
#include "qlm/domain.hpp"
#include "qlm/field.hpp"
#include "qlm/families.hpp"
#include "qlm/graph_geometry.hpp"
#include "qlm/level_set.hpp"
#include "qlm/mass.hpp"
#include "qlm/stability.hpp"
#include "qlm/flat_distance.hpp"
#include "qlm/config.hpp"
#include "qlm/report.hpp"
