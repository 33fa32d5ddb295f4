#pragma once

#include "ssnkit/cluster/agglomerative.hpp"
#include "ssnkit/cluster/dbscan.hpp"
#include "ssnkit/cluster/elbow.hpp"
#include "ssnkit/cluster/gmm.hpp"
#include "ssnkit/cluster/kmeans.hpp"
#include "ssnkit/cluster/pca.hpp"
#include "ssnkit/cluster/spectral.hpp"
#include "ssnkit/cluster/types.hpp"
