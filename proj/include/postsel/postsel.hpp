#pragma once

// Umbrella header.

#include "postsel/common.hpp"
#include "postsel/counting.hpp"
#include "postsel/csv.hpp"
#include "postsel/errors.hpp"
#include "postsel/fit.hpp"
#include "postsel/pointer.hpp"
#include "postsel/prepost.hpp"
#include "postsel/rng.hpp"
#include "postsel/sampling.hpp"
#include "postsel/scenario.hpp"
#include "postsel/scenario_json.hpp"
#include "postsel/shortcut.hpp"
#include "postsel/space.hpp"
#include "postsel/state.hpp"
