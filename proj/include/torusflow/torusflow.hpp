#pragma once

#include "torusflow/density_matrix.hpp"
#include "torusflow/estimates.hpp"
#include "torusflow/experiments.hpp"
#include "torusflow/io.hpp"
#include "torusflow/lattice.hpp"
#include "torusflow/spectral_state.hpp"
