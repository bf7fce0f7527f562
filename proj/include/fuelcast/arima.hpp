#pragma once

#include "fuelcast/arima/diagnostics.hpp"
#include "fuelcast/arima/fit.hpp"
#include "fuelcast/arima/nelder_mead.hpp"
#include "fuelcast/arima/polynomial.hpp"
#include "fuelcast/arima/simulate.hpp"
#include "fuelcast/arima/spec.hpp"
#include "fuelcast/arima/statespace.hpp"
