#pragma once

#include "ssnkit/classify/base.hpp"
#include "ssnkit/classify/experiment.hpp"
#include "ssnkit/classify/knn.hpp"
#include "ssnkit/classify/logistic.hpp"
#include "ssnkit/classify/naive_bayes.hpp"
#include "ssnkit/classify/svm.hpp"
#include "ssnkit/classify/tree.hpp"
