#pragma once

#include "bachvol/convert.hpp"
#include "bachvol/error.hpp"
#include "bachvol/greeks.hpp"
#include "bachvol/implied_vol.hpp"
#include "bachvol/pricing.hpp"
#include "bachvol/special_fn.hpp"
#include "bachvol/types.hpp"
