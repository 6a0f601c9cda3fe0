#pragma once

#include "erl/analysis.hpp"
#include "erl/bag.hpp"
#include "erl/crusade.hpp"
#include "erl/epidemic.hpp"
#include "erl/error.hpp"
#include "erl/event_log.hpp"
#include "erl/generators.hpp"
#include "erl/graph.hpp"
#include "erl/graph_io.hpp"
#include "erl/parallel.hpp"
#include "erl/policies.hpp"
#include "erl/rational.hpp"
#include "erl/resistance.hpp"
#include "erl/rng.hpp"
#include "erl/serialize.hpp"
#include "erl/sweep.hpp"
