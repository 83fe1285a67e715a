#pragma once

#include "splitpar/assembly.hpp"
#include "splitpar/decomposition.hpp"
#include "splitpar/errors.hpp"
#include "splitpar/grid.hpp"
#include "splitpar/harness.hpp"
#include "splitpar/linsolve.hpp"
#include "splitpar/problem.hpp"
#include "splitpar/sparse_operator.hpp"
#include "splitpar/split_operators.hpp"
#include "splitpar/steppers.hpp"
#include "splitpar/tensor.hpp"
