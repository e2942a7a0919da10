#pragma once

#include "bigint.hpp"
#include "bijection.hpp"
#include "combinatorics.hpp"
#include "errors.hpp"
#include "oracle.hpp"
#include "remainder.hpp"
#include "rng.hpp"
#include "spectrum.hpp"
#include "tensor.hpp"
#include "wht.hpp"
