#pragma once

#include "noise.hpp"
#include "params.hpp"
#include "boundary.hpp"
#include "ensemble.hpp"
#include "ensemble_io.hpp"
#include "sampler.hpp"
#include "couplings.hpp"
#include "second_class.hpp"
#include "label_walk.hpp"
#include "analytics.hpp"
#include "oracle.hpp"
#include "asep.hpp"
#include "stats.hpp"
#include "parallel.hpp"
#include "experiments.hpp"
