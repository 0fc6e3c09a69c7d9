#pragma once

#include "hadamard/space.hpp"
#include "hadamard/euclidean.hpp"
#include "hadamard/spider.hpp"
#include "hadamard/spd.hpp"
#include "hadamard/treespace.hpp"
#include "hadamard/components.hpp"
#include "hadamard/random.hpp"
#include "hadamard/solvers.hpp"
#include "hadamard/oracles.hpp"
