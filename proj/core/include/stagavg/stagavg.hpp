#pragma once

#include "stagavg/algorithms.hpp"
#include "stagavg/analysis.hpp"
#include "stagavg/errors.hpp"
#include "stagavg/format.hpp"
#include "stagavg/harness.hpp"
#include "stagavg/point.hpp"
#include "stagavg/problem.hpp"
#include "stagavg/problems.hpp"
#include "stagavg/random.hpp"
#include "stagavg/verify.hpp"
