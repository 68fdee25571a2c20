#pragma once

#include "vortnet/adjacency.hpp"
#include "vortnet/analysis.hpp"
#include "vortnet/bench.hpp"
#include "vortnet/eigensolvers.hpp"
#include "vortnet/error.hpp"
#include "vortnet/field.hpp"
#include "vortnet/format.hpp"
#include "vortnet/io.hpp"
#include "vortnet/parallel.hpp"
#include "vortnet/render.hpp"
#include "vortnet/sampling.hpp"
