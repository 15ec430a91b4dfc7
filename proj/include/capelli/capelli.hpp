#pragma once

#include "capelli/polynomial.hpp"
#include "capelli/weyl.hpp"
#include "capelli/configs.hpp"
#include "capelli/polarized.hpp"
#include "capelli/detops.hpp"
#include "capelli/identities.hpp"
