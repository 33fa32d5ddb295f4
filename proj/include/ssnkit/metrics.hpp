#pragma once

#include "ssnkit/metrics/classification.hpp"
#include "ssnkit/metrics/cluster_quality.hpp"
