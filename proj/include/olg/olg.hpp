#pragma once

// Core model: technology, equilibrium constructions, diagnostics, welfare.
// The I/O layers (config.hpp, report.hpp) are separate includes; report.hpp
// additionally expects nlohmann's single-header json.hpp on the include path.

#include "olg/diagnostics.hpp"
#include "olg/economy.hpp"
#include "olg/equilibrium.hpp"
#include "olg/errors.hpp"
#include "olg/welfare.hpp"
