#pragma once

// Umbrella include for the whole library.  json_io.hpp is intentionally
// left out: it needs the single-header nlohmann json library on the include
// path, which consumers of the core algebra may not carry.

#include "gammaspec/cech.hpp"
#include "gammaspec/core.hpp"
#include "gammaspec/dot.hpp"
#include "gammaspec/gamma_module.hpp"
#include "gammaspec/homomorphism.hpp"
#include "gammaspec/ideal.hpp"
#include "gammaspec/intlattice.hpp"
#include "gammaspec/localization.hpp"
#include "gammaspec/module_localization.hpp"
#include "gammaspec/mult_system.hpp"
#include "gammaspec/semiring.hpp"
#include "gammaspec/sheaf.hpp"
#include "gammaspec/spectrum.hpp"
#include "gammaspec/tensor.hpp"
#include "gammaspec/verify.hpp"
