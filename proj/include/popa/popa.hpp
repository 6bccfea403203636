#pragma once

#include "popa/errors.hpp"
#include "popa/evt.hpp"
#include "popa/group.hpp"
#include "popa/grv.hpp"
#include "popa/haar.hpp"
#include "popa/homs.hpp"
#include "popa/linalg.hpp"
#include "popa/numeric.hpp"
#include "popa/radial.hpp"
#include "popa/report.hpp"
#include "popa/rng.hpp"
#include "popa/sampling.hpp"
#include "popa/scalar.hpp"
#include "popa/scalar_homs.hpp"
#include "popa/vec.hpp"
