#pragma once

#include "vilenkin/group.hpp"
#include "vilenkin/stepfn.hpp"
#include "vilenkin/transform.hpp"
#include "vilenkin/shift_invariant.hpp"
#include "vilenkin/fmra.hpp"
#include "vilenkin/wavelet2.hpp"
