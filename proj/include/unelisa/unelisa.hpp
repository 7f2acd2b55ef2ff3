#pragma once

#include "unelisa/baselines.hpp"
#include "unelisa/core.hpp"
#include "unelisa/gibbs.hpp"
#include "unelisa/harness.hpp"
#include "unelisa/io.hpp"
#include "unelisa/ising_approx.hpp"
#include "unelisa/metrics.hpp"
#include "unelisa/nodewise.hpp"
#include "unelisa/oracle_enum.hpp"
#include "unelisa/pairwise.hpp"
#include "unelisa/predict.hpp"
#include "unelisa/prune.hpp"
#include "unelisa/rng.hpp"
