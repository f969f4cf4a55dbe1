#pragma once

// Umbrella header.

#include "substream/bench.hpp"
#include "substream/core.hpp"
#include "substream/datagen.hpp"
#include "substream/dpr1.hpp"
#include "substream/rng.hpp"
#include "substream/theory.hpp"
#include "substream/trackers.hpp"
