#pragma once

// Umbrella header.

#include "anglers/angles.hpp"
#include "anglers/gram.hpp"
#include "anglers/io_json.hpp"
#include "anglers/layered.hpp"
#include "anglers/lp.hpp"
#include "anglers/minkowski.hpp"
#include "anglers/polylog.hpp"
#include "anglers/simplex.hpp"
#include "anglers/surfaces.hpp"
#include "anglers/tet_volume.hpp"
#include "anglers/triangulation.hpp"
#include "anglers/volume_opt.hpp"
