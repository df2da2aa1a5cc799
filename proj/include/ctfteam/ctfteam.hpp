#pragma once

// Umbrella header for the library (the HTTP binding lives in http.hpp).

#include "ctfteam/assembly.hpp"
#include "ctfteam/assignment.hpp"
#include "ctfteam/compare.hpp"
#include "ctfteam/core_model.hpp"
#include "ctfteam/error.hpp"
#include "ctfteam/feasibility.hpp"
#include "ctfteam/io.hpp"
#include "ctfteam/metrics.hpp"
#include "ctfteam/pipeline.hpp"
#include "ctfteam/service.hpp"
