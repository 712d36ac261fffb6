#pragma once

// Umbrella header: the full simplex information-geometry toolkit.

#include "simplex_infogeo/aggregation.hpp"
#include "simplex_infogeo/batch.hpp"
#include "simplex_infogeo/composition.hpp"
#include "simplex_infogeo/contrast.hpp"
#include "simplex_infogeo/dataset.hpp"
#include "simplex_infogeo/divergence.hpp"
#include "simplex_infogeo/duality.hpp"
#include "simplex_infogeo/errors.hpp"
#include "simplex_infogeo/geometry.hpp"
#include "simplex_infogeo/version.hpp"
