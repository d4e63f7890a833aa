#pragma once

// Umbrella header: an explicit, fully parallel Robin-Robin partitioned solver
// for a linearized fluid-structure interaction system (Stokes flow coupled to
// linear elasticity across a fixed interface), with an adaptive mesh-extension
// operator, a discrete energy monitor, and a manufactured-solution harness.

#include "rrfsi/ale.hpp"
#include "rrfsi/coupling.hpp"
#include "rrfsi/errors.hpp"
#include "rrfsi/fem.hpp"
#include "rrfsi/fluid_solver.hpp"
#include "rrfsi/harness.hpp"
#include "rrfsi/io.hpp"
#include "rrfsi/manufactured.hpp"
#include "rrfsi/mesh.hpp"
#include "rrfsi/orchestrator.hpp"
#include "rrfsi/quadrature.hpp"
#include "rrfsi/sparse.hpp"
#include "rrfsi/structure_solver.hpp"
#include "rrfsi/trace.hpp"
