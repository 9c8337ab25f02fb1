#pragma once

#include "padic_dispersion/arithmetic.hpp"
#include "padic_dispersion/ball.hpp"
#include "padic_dispersion/errors.hpp"
#include "padic_dispersion/exp_sums.hpp"
#include "padic_dispersion/fft.hpp"
#include "padic_dispersion/histogram.hpp"
#include "padic_dispersion/newton.hpp"
#include "padic_dispersion/oscillatory.hpp"
#include "padic_dispersion/padic.hpp"
#include "padic_dispersion/parallel.hpp"
#include "padic_dispersion/polynomial.hpp"
#include "padic_dispersion/schwartz_bruhat.hpp"
#include "padic_dispersion/surface.hpp"
#include "padic_dispersion/wave.hpp"
