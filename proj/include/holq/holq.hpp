/// Umbrella header.
#pragma once

#include "holq/adiabatic.hpp"
#include "holq/gates.hpp"
#include "holq/holonomy.hpp"
#include "holq/matrix.hpp"
#include "holq/models.hpp"
#include "holq/program_io.hpp"
