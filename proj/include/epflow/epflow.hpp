#pragma once

#include "epflow/besov.hpp"
#include "epflow/config.hpp"
#include "epflow/diagnostics.hpp"
#include "epflow/dynamics.hpp"
#include "epflow/errors.hpp"
#include "epflow/functionals.hpp"
#include "epflow/grid.hpp"
#include "epflow/helmholtz.hpp"
#include "epflow/io.hpp"
#include "epflow/run.hpp"
#include "epflow/scenarios.hpp"
#include "epflow/verify.hpp"
