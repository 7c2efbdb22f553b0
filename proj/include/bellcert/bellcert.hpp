// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "bellcert/errors.hpp"
#include "bellcert/ghz.hpp"
#include "bellcert/guessing.hpp"
#include "bellcert/planner.hpp"
#include "bellcert/qcore.hpp"
#include "bellcert/random.hpp"
#include "bellcert/simulator.hpp"
#include "bellcert/special.hpp"
#include "bellcert/strategy.hpp"
#include "bellcert/strategy_json.hpp"
