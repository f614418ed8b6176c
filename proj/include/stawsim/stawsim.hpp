#pragma once

// Umbrella header for the standing-wave atom scattering toolkit.

#include "stawsim/adiabatic.hpp"
#include "stawsim/core.hpp"
#include "stawsim/gaussian_dynamics.hpp"
#include "stawsim/io.hpp"
#include "stawsim/ladder.hpp"
#include "stawsim/pattern.hpp"
#include "stawsim/resonant.hpp"
#include "stawsim/specfun.hpp"
#include "stawsim/wavepacket.hpp"
