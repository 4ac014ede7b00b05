#pragma once

// Umbrella header: the whole library in one include.

#include "infomap/context_maps.hpp"
#include "infomap/detection_log.hpp"
#include "infomap/error.hpp"
#include "infomap/gm_phd.hpp"
#include "infomap/grid.hpp"
#include "infomap/hierarchy.hpp"
#include "infomap/hierarchy_config.hpp"
#include "infomap/image.hpp"
#include "infomap/information_map.hpp"
#include "infomap/mapbuild.hpp"
#include "infomap/native_format.hpp"
#include "infomap/occlusion_experiment.hpp"
#include "infomap/ospa.hpp"
#include "infomap/scenario.hpp"
#include "infomap/tracker.hpp"
