#pragma once

// Umbrella header: moments and fluctuation statistics of characteristic
// polynomials of truncated Haar matrices from O(N), U(N) and Sp(2N).

#include "truncmom/asymptotics.hpp"
#include "truncmom/common.hpp"
#include "truncmom/ensemble.hpp"
#include "truncmom/gamma_products.hpp"
#include "truncmom/jack.hpp"
#include "truncmom/partitions.hpp"
#include "truncmom/quadrature.hpp"
#include "truncmom/records.hpp"
#include "truncmom/rng.hpp"
#include "truncmom/sampling.hpp"
#include "truncmom/series.hpp"
#include "truncmom/special_functions.hpp"
#include "truncmom/validation.hpp"
