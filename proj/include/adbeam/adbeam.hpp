#pragma once

#include "adbeam/beam_core.hpp"
#include "adbeam/closed_form.hpp"
#include "adbeam/diagnostics.hpp"
#include "adbeam/energy.hpp"
#include "adbeam/errors.hpp"
#include "adbeam/harness.hpp"
#include "adbeam/spectral_basis.hpp"
#include "adbeam/time_integrator.hpp"
#include "adbeam/trajectory.hpp"
#include "adbeam/version.hpp"
