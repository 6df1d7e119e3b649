// Umbrella header.
#pragma once

#include "shortsieve/arith.hpp"
#include "shortsieve/common.hpp"
#include "shortsieve/decomposition.hpp"
#include "shortsieve/dirichlet.hpp"
#include "shortsieve/factor.hpp"
#include "shortsieve/identities.hpp"
#include "shortsieve/primes.hpp"
#include "shortsieve/rational.hpp"
#include "shortsieve/report.hpp"
#include "shortsieve/sieve_weights.hpp"
#include "shortsieve/stats.hpp"
