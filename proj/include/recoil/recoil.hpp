#pragma once

// Everything: material model, surface modes, Green function, force, emitter dynamics.

#include "recoil/constants.hpp"
#include "recoil/errors.hpp"
#include "recoil/material.hpp"
#include "recoil/quadrature.hpp"
#include "recoil/dispersion.hpp"
#include "recoil/modes.hpp"
#include "recoil/greens.hpp"
#include "recoil/dynamics.hpp"
#include "recoil/force.hpp"
#include "recoil/efc.hpp"
