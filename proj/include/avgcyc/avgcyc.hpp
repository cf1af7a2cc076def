#pragma once

// Umbrella header for the averaging toolkit.

#include "avgcyc/averaging_exact.hpp"
#include "avgcyc/averaging_numeric.hpp"
#include "avgcyc/bell.hpp"
#include "avgcyc/errors.hpp"
#include "avgcyc/integrand.hpp"
#include "avgcyc/mixedtrig.hpp"
#include "avgcyc/normal_form.hpp"
#include "avgcyc/ode.hpp"
#include "avgcyc/parampoly.hpp"
#include "avgcyc/parse.hpp"
#include "avgcyc/rational.hpp"
#include "avgcyc/report.hpp"
#include "avgcyc/series.hpp"
#include "avgcyc/sturm.hpp"
#include "avgcyc/system.hpp"
#include "avgcyc/trigpoly.hpp"
#include "avgcyc/unperturbed.hpp"
#include "avgcyc/zero_scan.hpp"
