#pragma once

// Umbrella header for the workbench library.

#include "muw/calibration.hpp"
#include "muw/certificate.hpp"
#include "muw/common.hpp"
#include "muw/functional.hpp"
#include "muw/groups.hpp"
#include "muw/io.hpp"
#include "muw/lift.hpp"
#include "muw/munit.hpp"
#include "muw/operator.hpp"
#include "muw/positive.hpp"
#include "muw/qgroup.hpp"
#include "muw/report.hpp"
#include "muw/rng.hpp"
#include "muw/simplex.hpp"
#include "muw/slices.hpp"
#include "muw/space.hpp"
#include "muw/weyl.hpp"
