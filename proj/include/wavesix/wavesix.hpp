#pragma once

// Umbrella header.
#include "wavesix/bitmatrix.hpp"
#include "wavesix/codec.hpp"
#include "wavesix/construct.hpp"
#include "wavesix/error.hpp"
#include "wavesix/filtersim.hpp"
#include "wavesix/linalg6.hpp"
#include "wavesix/multilinear.hpp"
#include "wavesix/represent.hpp"
#include "wavesix/selftest.hpp"
#include "wavesix/z6.hpp"
