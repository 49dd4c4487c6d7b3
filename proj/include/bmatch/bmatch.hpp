#pragma once

// Umbrella header.

#include "bmatch/baselines.hpp"
#include "bmatch/bma.hpp"
#include "bmatch/core.hpp"
#include "bmatch/engine.hpp"
#include "bmatch/matching.hpp"
#include "bmatch/offline_oracle.hpp"
#include "bmatch/rng.hpp"
#include "bmatch/topology.hpp"
#include "bmatch/workloads.hpp"
