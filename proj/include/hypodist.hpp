#pragma once

#include "hypodist/errors.hpp"
#include "hypodist/grid.hpp"
#include "hypodist/geometry.hpp"
#include "hypodist/functions.hpp"
#include "hypodist/metrics.hpp"
#include "hypodist/lp.hpp"
#include "hypodist/estimator.hpp"
#include "hypodist/validation.hpp"
#include "hypodist/io.hpp"
