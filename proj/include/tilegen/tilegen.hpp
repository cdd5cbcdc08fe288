// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tilegen/builtins.hpp"
#include "tilegen/density.hpp"
#include "tilegen/errors.hpp"
#include "tilegen/gof.hpp"
#include "tilegen/quadrature.hpp"
#include "tilegen/sampler.hpp"
#include "tilegen/special.hpp"
#include "tilegen/stable.hpp"
#include "tilegen/tile_io.hpp"
#include "tilegen/tiling.hpp"
#include "tilegen/urng.hpp"
