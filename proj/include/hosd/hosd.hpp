// hosd.hpp
// Umbrella header for the higher-order Schmidt decomposition library.

#pragma once

#include "hosd/core.hpp"
#include "hosd/io.hpp"
#include "hosd/multischmidt.hpp"
#include "hosd/random.hpp"
#include "hosd/schmidt.hpp"
#include "hosd/spectral.hpp"
#include "hosd/statelib.hpp"
#include "hosd/tensor.hpp"
