#pragma once

#include "convote/ballots.hpp"
#include "convote/chain.hpp"
#include "convote/common.hpp"
#include "convote/graph.hpp"
#include "convote/rational.hpp"
#include "convote/rng.hpp"
#include "convote/rules.hpp"
#include "convote/simulate.hpp"
