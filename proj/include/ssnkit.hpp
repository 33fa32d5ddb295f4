#pragma once

#include "ssnkit/classify.hpp"
#include "ssnkit/cluster.hpp"
#include "ssnkit/config.hpp"
#include "ssnkit/embed.hpp"
#include "ssnkit/featurize.hpp"
#include "ssnkit/metrics.hpp"
#include "ssnkit/seqio.hpp"
#include "ssnkit/ssn.hpp"
