#pragma once

#include "kghop/archive.hpp"
#include "kghop/bench.hpp"
#include "kghop/cache.hpp"
#include "kghop/core.hpp"
#include "kghop/engine.hpp"
#include "kghop/generate.hpp"
#include "kghop/incidence.hpp"
#include "kghop/oracle.hpp"
#include "kghop/partition.hpp"
#include "kghop/paths.hpp"
#include "kghop/vector.hpp"
