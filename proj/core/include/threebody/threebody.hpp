#pragma once

#include "threebody/dynamics.hpp"
#include "threebody/errors.hpp"
#include "threebody/geometry.hpp"
#include "threebody/hamiltonians.hpp"
#include "threebody/integrators.hpp"
#include "threebody/metrics.hpp"
#include "threebody/oracle.hpp"
#include "threebody/potentials.hpp"
#include "threebody/reference.hpp"
