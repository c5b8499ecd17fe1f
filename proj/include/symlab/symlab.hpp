#pragma once

#include "symlab/battery.hpp"
#include "symlab/eigen_rayleigh.hpp"
#include "symlab/errors.hpp"
#include "symlab/inequality_bench.hpp"
#include "symlab/model_geometry.hpp"
#include "symlab/quadrature.hpp"
#include "symlab/radial_calculus.hpp"
#include "symlab/radial_poisson.hpp"
#include "symlab/rearrangement.hpp"
#include "symlab/scalar_constants.hpp"
#include "symlab/sharpness.hpp"
#include "symlab/talenti.hpp"
