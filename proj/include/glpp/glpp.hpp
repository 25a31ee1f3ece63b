#pragma once

#include "glpp/asymptotics.hpp"
#include "glpp/errors.hpp"
#include "glpp/experiment.hpp"
#include "glpp/growth.hpp"
#include "glpp/lattice.hpp"
#include "glpp/parallel.hpp"
#include "glpp/random.hpp"
#include "glpp/sample_set.hpp"
#include "glpp/special_functions.hpp"
#include "glpp/stats.hpp"
#include "glpp/table_io.hpp"
#include "glpp/version.hpp"
#include "glpp/weights.hpp"
