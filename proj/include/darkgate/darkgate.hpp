#pragma once

// Umbrella header for the dark-state conditional phase gate simulator.

#include "darkgate/common.hpp"
#include "darkgate/statevec.hpp"
#include "darkgate/model.hpp"
#include "darkgate/pulses.hpp"
#include "darkgate/propagator.hpp"
#include "darkgate/bloch.hpp"
#include "darkgate/gate.hpp"
#include "darkgate/config.hpp"
#include "darkgate/io.hpp"
