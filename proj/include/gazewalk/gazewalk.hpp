#pragma once

// Umbrella header for the gaze scan-path simulation library.

#include "gazewalk/bias.hpp"
#include "gazewalk/core.hpp"
#include "gazewalk/image.hpp"
#include "gazewalk/io.hpp"
#include "gazewalk/rng.hpp"
#include "gazewalk/saliency.hpp"
#include "gazewalk/shift.hpp"
#include "gazewalk/stable.hpp"
#include "gazewalk/stats.hpp"
#include "gazewalk/walker.hpp"
