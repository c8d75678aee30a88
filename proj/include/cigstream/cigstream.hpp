#pragma once

#include "cigstream/stream_model.hpp"
#include "cigstream/stream_io.hpp"
#include "cigstream/shot_track.hpp"
#include "cigstream/online_cluster.hpp"
#include "cigstream/cig_graph.hpp"
#include "cigstream/narrative.hpp"
#include "cigstream/metrics.hpp"
#include "cigstream/pipeline.hpp"
#include "cigstream/evaluation.hpp"
#include "cigstream/export.hpp"
#include "cigstream/synth.hpp"
#include "cigstream/oracles.hpp"
