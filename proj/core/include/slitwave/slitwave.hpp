#pragma once

#include "slitwave/calibration.hpp"
#include "slitwave/config.hpp"
#include "slitwave/errors.hpp"
#include "slitwave/intensity.hpp"
#include "slitwave/modes.hpp"
#include "slitwave/pattern_io.hpp"
#include "slitwave/physics.hpp"
#include "slitwave/pipeline.hpp"
#include "slitwave/propagation.hpp"
#include "slitwave/version.hpp"
