#pragma once

#include "veinid/components.hpp"
#include "veinid/config.hpp"
#include "veinid/dataset.hpp"
#include "veinid/error.hpp"
#include "veinid/eval.hpp"
#include "veinid/filters.hpp"
#include "veinid/image.hpp"
#include "veinid/matching.hpp"
#include "veinid/minutiae.hpp"
#include "veinid/pipeline.hpp"
#include "veinid/pnm.hpp"
#include "veinid/segmentation.hpp"
#include "veinid/synth.hpp"
#include "veinid/template_io.hpp"
#include "veinid/thinning.hpp"
