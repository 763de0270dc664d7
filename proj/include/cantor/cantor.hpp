#pragma once

#include "cantor/bigfloat.hpp"
#include "cantor/cdf.hpp"
#include "cantor/counting.hpp"
#include "cantor/error.hpp"
#include "cantor/experiments.hpp"
#include "cantor/fourier.hpp"
#include "cantor/interval_union.hpp"
#include "cantor/measure.hpp"
#include "cantor/parallel.hpp"
#include "cantor/params.hpp"
#include "cantor/rational.hpp"
#include "cantor/sampler.hpp"
#include "cantor/scale_chain.hpp"
#include "cantor/schedule.hpp"
#include "cantor/targets.hpp"
