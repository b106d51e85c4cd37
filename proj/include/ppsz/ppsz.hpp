#pragma once

#include "ppsz/cnf.hpp"
#include "ppsz/dimacs.hpp"
#include "ppsz/engine.hpp"
#include "ppsz/error.hpp"
#include "ppsz/gf2.hpp"
#include "ppsz/graph.hpp"
#include "ppsz/inference.hpp"
#include "ppsz/linear.hpp"
#include "ppsz/parallel.hpp"
#include "ppsz/rng.hpp"
#include "ppsz/tseitin.hpp"
