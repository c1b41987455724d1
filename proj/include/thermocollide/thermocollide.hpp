#pragma once

#include "thermocollide/spectra.hpp"
#include "thermocollide/hilbert_blocks.hpp"
#include "thermocollide/collision_channel.hpp"
#include "thermocollide/engine.hpp"
#include "thermocollide/exact.hpp"
#include "thermocollide/trajectories.hpp"
#include "thermocollide/config.hpp"
#include "thermocollide/experiments.hpp"
