#pragma once

#include "ringres/analysis.hpp"
#include "ringres/angles.hpp"
#include "ringres/error.hpp"
#include "ringres/resilience.hpp"
#include "ringres/rings.hpp"
#include "ringres/scenario.hpp"
#include "ringres/schedule.hpp"
#include "ringres/simulator.hpp"
#include "ringres/svg.hpp"
