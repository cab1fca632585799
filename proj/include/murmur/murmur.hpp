#pragma once

#include "murmur/chebyshev.hpp"
#include "murmur/curve.hpp"
#include "murmur/dataset.hpp"
#include "murmur/ecpoint.hpp"
#include "murmur/error.hpp"
#include "murmur/logreg.hpp"
#include "murmur/matrix.hpp"
#include "murmur/model_io.hpp"
#include "murmur/murmuration.hpp"
#include "murmur/pca.hpp"
#include "murmur/primes.hpp"
