#pragma once

#include "gpfa/baselines.hpp"
#include "gpfa/embedding.hpp"
#include "gpfa/error.hpp"
#include "gpfa/evaluation.hpp"
#include "gpfa/gpfa.hpp"
#include "gpfa/graph.hpp"
#include "gpfa/io.hpp"
#include "gpfa/model.hpp"
#include "gpfa/neighborhoods.hpp"
#include "gpfa/predictability.hpp"
#include "gpfa/preprocessing.hpp"
#include "gpfa/types.hpp"
