#pragma once

#include "motifscope/community.hpp"
#include "motifscope/graph.hpp"
#include "motifscope/ingest.hpp"
#include "motifscope/metrics.hpp"
#include "motifscope/motif.hpp"
#include "motifscope/null_model.hpp"
#include "motifscope/parallel.hpp"
#include "motifscope/report.hpp"
#include "motifscope/stats.hpp"
