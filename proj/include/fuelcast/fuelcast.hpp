#pragma once

#include "fuelcast/arima.hpp"
#include "fuelcast/backtest.hpp"
#include "fuelcast/config.hpp"
#include "fuelcast/distfit.hpp"
#include "fuelcast/error.hpp"
#include "fuelcast/ingest.hpp"
#include "fuelcast/month.hpp"
#include "fuelcast/report.hpp"
#include "fuelcast/series.hpp"
