#pragma once

#include "shrinkmask/bench.hpp"
#include "shrinkmask/detection.hpp"
#include "shrinkmask/error.hpp"
#include "shrinkmask/eval.hpp"
#include "shrinkmask/geometry.hpp"
#include "shrinkmask/gradcheck.hpp"
#include "shrinkmask/io/annotation.hpp"
#include "shrinkmask/io/detections.hpp"
#include "shrinkmask/io/mapfile.hpp"
#include "shrinkmask/io/render.hpp"
#include "shrinkmask/labelgen.hpp"
#include "shrinkmask/losses.hpp"
#include "shrinkmask/parallel.hpp"
#include "shrinkmask/postproc.hpp"
#include "shrinkmask/raster.hpp"
#include "shrinkmask/study.hpp"
#include "shrinkmask/synth.hpp"
