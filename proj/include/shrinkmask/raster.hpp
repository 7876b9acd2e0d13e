#pragma once

#include "shrinkmask/raster/components.hpp"
#include "shrinkmask/raster/distance.hpp"
#include "shrinkmask/raster/grid.hpp"
#include "shrinkmask/raster/rasterize.hpp"
#include "shrinkmask/raster/stats.hpp"
