#pragma once

// Umbrella header.

#include "badlab/error.hpp"
#include "badlab/format.hpp"
#include "badlab/linalg.hpp"
#include "badlab/stats.hpp"
#include "badlab/rng.hpp"
#include "badlab/dataset.hpp"
#include "badlab/indices.hpp"
#include "badlab/normalization.hpp"
#include "badlab/correlation.hpp"
#include "badlab/badfit.hpp"
#include "badlab/diagnostics.hpp"
#include "badlab/distributions.hpp"
#include "badlab/thresholds.hpp"
#include "badlab/logistic.hpp"
#include "badlab/synthetic.hpp"
#include "badlab/meta.hpp"
#include "badlab/io.hpp"
