#pragma once

// Umbrella header.

#include "morphnet/canonical.hpp"
#include "morphnet/claims.hpp"
#include "morphnet/errors.hpp"
#include "morphnet/fit.hpp"
#include "morphnet/network.hpp"
#include "morphnet/nodes.hpp"
#include "morphnet/serialize.hpp"
#include "morphnet/signed_log.hpp"
#include "morphnet/targets.hpp"
