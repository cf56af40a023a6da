#pragma once

#include "localmath/convergence.hpp"
#include "localmath/error.hpp"
#include "localmath/expression.hpp"
#include "localmath/gauge_dirac.hpp"
#include "localmath/geometry_paths.hpp"
#include "localmath/parallel.hpp"
#include "localmath/scalar.hpp"
#include "localmath/scaled_calculus.hpp"
#include "localmath/scaled_number.hpp"
#include "localmath/scaled_vector.hpp"
#include "localmath/scaling_field.hpp"
