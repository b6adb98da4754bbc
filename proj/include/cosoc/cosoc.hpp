#pragma once

#include "cosoc/corpus.hpp"
#include "cosoc/csv.hpp"
#include "cosoc/diffusion.hpp"
#include "cosoc/graphmetrics.hpp"
#include "cosoc/propensity.hpp"
#include "cosoc/rational.hpp"
#include "cosoc/report.hpp"
#include "cosoc/semantics.hpp"
#include "cosoc/synthgen.hpp"
#include "cosoc/types.hpp"
