#pragma once

#include "hsframe/errors.hpp"
#include "hsframe/hs_core.hpp"
#include "hsframe/frame_analysis.hpp"
#include "hsframe/weaving.hpp"
#include "hsframe/certificates.hpp"
#include "hsframe/infinite_models.hpp"
#include "hsframe/random.hpp"
#include "hsframe/frame_io.hpp"
#include "hsframe/cli_report.hpp"
