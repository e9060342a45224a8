#pragma once

#include "qarch/circuits.hpp"
#include "qarch/evaluator.hpp"
#include "qarch/graph.hpp"
#include "qarch/io.hpp"
#include "qarch/optimizer.hpp"
#include "qarch/rng.hpp"
#include "qarch/search.hpp"
#include "qarch/simulator.hpp"
