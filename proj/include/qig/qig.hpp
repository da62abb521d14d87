#pragma once

#include "qig/matrix.hpp"
#include "qig/eigen.hpp"
#include "qig/rng.hpp"
#include "qig/functions.hpp"
#include "qig/states.hpp"
#include "qig/quasi_entropy.hpp"
#include "qig/metrics.hpp"
#include "qig/io.hpp"
#include "qig/propcheck.hpp"
#include "qig/version.hpp"
