#pragma once

#include "smprod/ball.hpp"
#include "smprod/cache.hpp"
#include "smprod/certify.hpp"
#include "smprod/error.hpp"
#include "smprod/hcp.hpp"
#include "smprod/jeval.hpp"
#include "smprod/qforms.hpp"
#include "smprod/solver.hpp"
