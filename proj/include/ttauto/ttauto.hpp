#pragma once

#include "half_integer.hpp"
#include "graph.hpp"
#include "graph_map.hpp"
#include "train_track.hpp"
#include "pff.hpp"
#include "pnp.hpp"
#include "fic.hpp"
#include "ltt.hpp"
#include "automaton.hpp"
#include "io.hpp"
