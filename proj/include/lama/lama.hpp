#pragma once

#include "dot.hpp"
#include "dtg.hpp"
#include "heuristic.hpp"
#include "landmark_graph.hpp"
#include "landmark_heuristic.hpp"
#include "landmarks.hpp"
#include "oracle.hpp"
#include "reasonable_orderings.hpp"
#include "relaxation.hpp"
#include "scoring.hpp"
#include "search.hpp"
#include "task.hpp"
#include "task_io.hpp"
