#ifndef REGRESSLAB_REGRESSLAB_HPP
#define REGRESSLAB_REGRESSLAB_HPP

#include "regresslab/basis.hpp"
#include "regresslab/cv.hpp"
#include "regresslab/dataset.hpp"
#include "regresslab/errors.hpp"
#include "regresslab/glm.hpp"
#include "regresslab/kernel.hpp"
#include "regresslab/linalg.hpp"
#include "regresslab/metrics.hpp"
#include "regresslab/nn.hpp"
#include "regresslab/optim.hpp"
#include "regresslab/regpath.hpp"
#include "regresslab/rng.hpp"

#endif
