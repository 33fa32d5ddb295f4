#pragma once

#include "ssnkit/embed/factorization.hpp"
#include "ssnkit/embed/hope.hpp"
#include "ssnkit/embed/io.hpp"
#include "ssnkit/embed/skipgram.hpp"
#include "ssnkit/embed/spectral.hpp"
#include "ssnkit/embed/types.hpp"
#include "ssnkit/embed/walks.hpp"
