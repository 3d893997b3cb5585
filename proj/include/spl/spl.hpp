#pragma once

#include "spl/error.hpp"
#include "spl/graph.hpp"
#include "spl/network.hpp"
#include "spl/parallel.hpp"
#include "spl/stats.hpp"
#include "spl/dynamics.hpp"
#include "spl/fixedset.hpp"
#include "spl/growth.hpp"
#include "spl/membrane.hpp"
#include "spl/continuity.hpp"
#include "spl/knowing.hpp"
#include "spl/physical.hpp"
#include "spl/chemical.hpp"
#include "spl/fixtures.hpp"
#include "spl/harness.hpp"
