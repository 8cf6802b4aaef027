#pragma once

#include "gaussrough/config.hpp"
#include "gaussrough/covariance.hpp"
#include "gaussrough/criteria.hpp"
#include "gaussrough/errors.hpp"
#include "gaussrough/fit.hpp"
#include "gaussrough/fourier.hpp"
#include "gaussrough/gaussian.hpp"
#include "gaussrough/parallel.hpp"
#include "gaussrough/rng.hpp"
#include "gaussrough/roughpath.hpp"
#include "gaussrough/she.hpp"
#include "gaussrough/variation.hpp"
