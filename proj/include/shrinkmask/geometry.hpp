#pragma once

#include "shrinkmask/geometry/boolean.hpp"
#include "shrinkmask/geometry/clipping.hpp"
#include "shrinkmask/geometry/offset.hpp"
#include "shrinkmask/geometry/polygon.hpp"
