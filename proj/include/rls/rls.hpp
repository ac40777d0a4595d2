#pragma once

#include "rls/assignment.hpp"
#include "rls/coloring.hpp"
#include "rls/descent.hpp"
#include "rls/graph.hpp"
#include "rls/learning.hpp"
#include "rls/random.hpp"
#include "rls/solver.hpp"
