#pragma once

#include "fpm/grid.hpp"
#include "fpm/fields.hpp"
#include "fpm/spectral.hpp"
#include "fpm/model.hpp"
#include "fpm/diagnostics.hpp"
#include "fpm/timestepping.hpp"
#include "fpm/verify.hpp"
#include "fpm/config.hpp"
#include "fpm/io.hpp"
#include "fpm/campaigns.hpp"
