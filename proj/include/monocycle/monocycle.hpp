#pragma once

#include "monocycle/absorbing.hpp"
#include "monocycle/brute_force.hpp"
#include "monocycle/cluster.hpp"
#include "monocycle/error.hpp"
#include "monocycle/extremal.hpp"
#include "monocycle/graph.hpp"
#include "monocycle/hamiltonicity.hpp"
#include "monocycle/matching.hpp"
#include "monocycle/partition.hpp"
#include "monocycle/path_partition.hpp"
#include "monocycle/rng.hpp"
#include "monocycle/robustness.hpp"
