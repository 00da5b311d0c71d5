#pragma once

#include "hwr/anova.hpp"
#include "hwr/design_matrix.hpp"
#include "hwr/errors.hpp"
#include "hwr/index_set.hpp"
#include "hwr/lsqr.hpp"
#include "hwr/model.hpp"
#include "hwr/model_io.hpp"
#include "hwr/pipeline.hpp"
#include "hwr/rng.hpp"
#include "hwr/testbed.hpp"
#include "hwr/wavelet.hpp"
