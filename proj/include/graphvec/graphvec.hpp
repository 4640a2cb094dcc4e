#ifndef GRAPHVEC_GRAPHVEC_HPP_
#define GRAPHVEC_GRAPHVEC_HPP_

#include "graphvec/dataset.hpp"
#include "graphvec/error.hpp"
#include "graphvec/eval/ari.hpp"
#include "graphvec/eval/classify.hpp"
#include "graphvec/eval/kmeans.hpp"
#include "graphvec/eval/neighbors.hpp"
#include "graphvec/eval/wl_features.hpp"
#include "graphvec/graph.hpp"
#include "graphvec/hash.hpp"
#include "graphvec/model.hpp"
#include "graphvec/persistence.hpp"
#include "graphvec/rng.hpp"
#include "graphvec/sampler.hpp"
#include "graphvec/trainer.hpp"
#include "graphvec/vocabulary.hpp"
#include "graphvec/wl.hpp"

#endif  // GRAPHVEC_GRAPHVEC_HPP_
