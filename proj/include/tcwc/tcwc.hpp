#pragma once

#include "tcwc/builder.hpp"
#include "tcwc/core.hpp"
#include "tcwc/cwc1.hpp"
#include "tcwc/error.hpp"
#include "tcwc/golomb.hpp"
#include "tcwc/oracle.hpp"
#include "tcwc/packing.hpp"
#include "tcwc/planner.hpp"
#include "tcwc/report.hpp"
