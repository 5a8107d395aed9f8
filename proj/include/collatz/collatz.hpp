#pragma once

#include "collatz/arith.hpp"
#include "collatz/bounds.hpp"
#include "collatz/compositions.hpp"
#include "collatz/dynamics.hpp"
#include "collatz/errors.hpp"
#include "collatz/harness/enumerate.hpp"
#include "collatz/harness/output.hpp"
#include "collatz/harness/sweep.hpp"
#include "collatz/tuples.hpp"
