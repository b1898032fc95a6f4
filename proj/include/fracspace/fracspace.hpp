#pragma once

// Umbrella header for the fracspace toolkit.

#include "fracspace/besov.hpp"
#include "fracspace/catalog.hpp"
#include "fracspace/cocompact.hpp"
#include "fracspace/errors.hpp"
#include "fracspace/exponents.hpp"
#include "fracspace/fft.hpp"
#include "fracspace/gfn_io.hpp"
#include "fracspace/grid.hpp"
#include "fracspace/interp.hpp"
#include "fracspace/minimize.hpp"
#include "fracspace/mollify.hpp"
#include "fracspace/norms.hpp"
#include "fracspace/parallel.hpp"
#include "fracspace/reduce.hpp"
#include "fracspace/rng.hpp"
#include "fracspace/testset.hpp"
