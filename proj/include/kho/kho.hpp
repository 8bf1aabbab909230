#pragma once

// Umbrella header.

#include "kho/classical.hpp"
#include "kho/core.hpp"
#include "kho/decoherence.hpp"
#include "kho/experiments.hpp"
#include "kho/io.hpp"
#include "kho/linear_map.hpp"
#include "kho/optics.hpp"
#include "kho/oracle.hpp"
#include "kho/propagators.hpp"
#include "kho/version.hpp"
#include "kho/wigner.hpp"
