#pragma once

// Umbrella header.

#include "slicefn/errors.hpp"
#include "slicefn/elem.hpp"
#include "slicefn/algebra.hpp"
#include "slicefn/slice.hpp"
#include "slicefn/poly.hpp"
#include "slicefn/rational.hpp"
#include "slicefn/geometry.hpp"
#include "slicefn/expansions.hpp"
#include "slicefn/conversion.hpp"
#include "slicefn/classify.hpp"
