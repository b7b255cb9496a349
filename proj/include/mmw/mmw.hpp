#pragma once

#include "mmw/errors.hpp"
#include "mmw/grid.hpp"
#include "mmw/extremum.hpp"
#include "mmw/mbvd.hpp"
#include "mmw/network.hpp"
#include "mmw/metrics.hpp"
#include "mmw/fitting.hpp"
#include "mmw/nelder_mead.hpp"
#include "mmw/synthesis.hpp"
#include "mmw/text.hpp"
#include "mmw/touchstone.hpp"
#include "mmw/design_file.hpp"
#include "mmw/csv.hpp"
#include "mmw/svg.hpp"
