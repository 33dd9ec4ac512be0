#pragma once

#include "cgl/arith.hpp"
#include "cgl/characters.hpp"
#include "cgl/diagnostics.hpp"
#include "cgl/errors.hpp"
#include "cgl/explicit_formula.hpp"
#include "cgl/goldbach.hpp"
#include "cgl/lfunction.hpp"
#include "cgl/numeric.hpp"
#include "cgl/special.hpp"
#include "cgl/zero_catalog.hpp"
