#pragma once

#include "bigint.hpp"
#include "descent.hpp"
#include "errors.hpp"
#include "families.hpp"
#include "json_io.hpp"
#include "lucas.hpp"
#include "oracle.hpp"
#include "poly.hpp"
#include "quadint.hpp"
#include "sieve.hpp"
#include "solution.hpp"
#include "solver.hpp"
