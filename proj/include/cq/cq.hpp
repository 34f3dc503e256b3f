#pragma once

#include "cq/error.hpp"
#include "cq/experiments.hpp"
#include "cq/generators.hpp"
#include "cq/graph.hpp"
#include "cq/io.hpp"
#include "cq/kmeans.hpp"
#include "cq/layout.hpp"
#include "cq/layouts.hpp"
#include "cq/metrics.hpp"
#include "cq/random.hpp"
#include "cq/report.hpp"
