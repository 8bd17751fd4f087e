#pragma once

#include "qfa/analysis.hpp"
#include "qfa/convert.hpp"
#include "qfa/errors.hpp"
#include "qfa/io.hpp"
#include "qfa/linalg.hpp"
#include "qfa/models.hpp"
#include "qfa/random.hpp"
#include "qfa/sim.hpp"
