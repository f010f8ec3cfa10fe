#pragma once
// convenience umbrella

#include "hdd/agents.hpp"
#include "hdd/config.hpp"
#include "hdd/graph.hpp"
#include "hdd/history.hpp"
#include "hdd/io.hpp"
#include "hdd/protocol.hpp"
#include "hdd/rng.hpp"
#include "hdd/scenario.hpp"
#include "hdd/sim.hpp"
#include "hdd/trust.hpp"
#include "hdd/version.hpp"
