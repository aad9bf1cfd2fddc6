#pragma once

// Phase-noise modeling toolkit: closed-form oscillator/PLL spectra, discrete
// time-shift generators, Welch spectral estimation, and the parametric
// spectrum fit pipeline.

#include "pnkit/errors.hpp"
#include "pnkit/model/oscillator.hpp"
#include "pnkit/model/pll.hpp"
#include "pnkit/model/spectrum_model.hpp"
#include "pnkit/timegen/rng.hpp"
#include "pnkit/timegen/series.hpp"
#include "pnkit/timegen/wiener.hpp"
#include "pnkit/timegen/pll_sim.hpp"
#include "pnkit/timegen/sde.hpp"
#include "pnkit/timegen/baseband.hpp"
#include "pnkit/spectral/trace.hpp"
#include "pnkit/spectral/welch.hpp"
#include "pnkit/fit/regression.hpp"
#include "pnkit/fit/segments.hpp"
#include "pnkit/fit/estimators.hpp"
#include "pnkit/fit/pipeline.hpp"
#include "pnkit/io/csv.hpp"
#include "pnkit/io/binary.hpp"
#include "pnkit/io/report_json.hpp"
